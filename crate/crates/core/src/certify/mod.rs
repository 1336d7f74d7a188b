//! Checkable certificates for power convergence of Abel averages.
//!
//! Condition (i) is the dynamical statement: for every tested `α` the powers
//! `A_α^n` converge. Condition (ii) is the spectral one: `σ(T)` lies in
//! `Re ζ ≤ 1` and `X = Ker(I−T) ⊕ Im(I−T)`. The two are checked by
//! independent code paths so that their agreement means something.

pub mod generate;

use crate::abel::{
    abel_average, cesaro_average, power_iterate, riesz_projection_at_one, AbelParameter, DivergenceReason,
    RieszProjection, BLOW_UP_THRESHOLD, DEFAULT_MAX_DOUBLINGS, DEFAULT_POWER_TOL,
};
use crate::linalg::{
    default_rank_tol, eigendecompose, hermitian_part_max_eig, image_basis_scaled, kernel_basis_scaled, max_principal_angle,
    numerical_rank_scaled, operator_norm, ComplexMatrix, C64,
};
use crate::{Error, Result};

/// Angle threshold for [`kernel_image_transfer_check`].
pub const TRANSFER_ANGLE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Power-iteration tolerance, also the relative slack on `Re ζ ≤ 1`.
    pub tol: f64,
    /// Relative singular-value threshold; `None` means `n·ε`.
    pub rank_tol: Option<f64>,
    pub max_doublings: u32,
    /// Eigenvalues closer than this are treated as one cluster when testing
    /// semisimplicity on the unit circle.
    pub cluster_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol: DEFAULT_POWER_TOL, rank_tol: None, max_doublings: DEFAULT_MAX_DOUBLINGS, cluster_radius: 1e-6 }
    }
}

impl Tolerances {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn rank_tol_for(&self, n: usize) -> f64 {
        self.rank_tol.unwrap_or_else(|| default_rank_tol(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionIVerdict {
    ConvergedAll,
    Diverged,
    Skipped,
}

impl ConditionIVerdict {
    pub fn tag(self) -> &'static str {
        match self {
            ConditionIVerdict::ConvergedAll => "converged_all",
            ConditionIVerdict::Diverged => "diverged",
            ConditionIVerdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionIIVerdict {
    Holds,
    SpectrumEscapes,
    DecompositionFails,
}

impl ConditionIIVerdict {
    pub fn tag(self) -> &'static str {
        match self {
            ConditionIIVerdict::Holds => "holds",
            ConditionIIVerdict::SpectrumEscapes => "spectrum_escapes",
            ConditionIIVerdict::DecompositionFails => "decomposition_fails",
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Eigenvalue with the largest real part (reported for every verdict).
    MaxRealPart(C64),
    /// An eigenvalue with `Re ζ > 1` beyond tolerance.
    OffendingEigenvalue(C64),
    /// `rank(ζI − T)` and `rank((ζI − T)²)` at the tested point `ζ`.
    RankGap { at: C64, first: usize, second: usize },
    /// The direct-sum stack test failed.
    StackTest(String),
    /// Powers of `A_α` failed to converge; `exponent` is the last power tried.
    Divergence { alpha: f64, reason: DivergenceReason, exponent: u64 },
    /// `1/α` is an eigenvalue of `T`.
    ResolventPole { alpha: f64 },
    /// Two converged limits differ by more than the agreement tolerance.
    LimitMismatch { alpha_a: f64, alpha_b: f64, distance: f64 },
    /// `‖Tⁿ‖` left the representable range at exponent `n`.
    GrowthOverflow { n: u64 },
    SpectralRadius(f64),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::MaxRealPart(_) => "max_real_part",
            Witness::OffendingEigenvalue(_) => "offending_eigenvalue",
            Witness::RankGap { .. } => "rank_gap",
            Witness::StackTest(_) => "stack_test",
            Witness::Divergence { .. } => "divergence",
            Witness::ResolventPole { .. } => "resolvent_pole",
            Witness::LimitMismatch { .. } => "limit_mismatch",
            Witness::GrowthOverflow { .. } => "growth_overflow",
            Witness::SpectralRadius(_) => "spectral_radius",
        }
    }

    /// True for witnesses that support a negative verdict.
    pub fn is_negative(&self) -> bool {
        !matches!(self, Witness::MaxRealPart(_) | Witness::SpectralRadius(_))
    }
}

/// Outcome of the power iteration for one `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEvidence {
    pub alpha: f64,
    pub converged: bool,
    pub resolvent_pole: bool,
    pub steps: u64,
    /// Last increment `‖M^{2^{k+1}} − M^{2^k}‖` recorded.
    pub final_increment: Option<f64>,
    pub divergence_reason: Option<DivergenceReason>,
    pub limit: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionIReport {
    pub verdict: ConditionIVerdict,
    pub evidence: Vec<AlphaEvidence>,
    /// The limit for the first `α`, when all converged and agree.
    pub limit: Option<ComplexMatrix>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionIIReport {
    pub verdict: ConditionIIVerdict,
    pub max_real_part: Option<C64>,
    pub rank_first: usize,
    pub rank_second: usize,
    pub projection: Option<RieszProjection>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub condition_i: Option<ConditionIReport>,
    pub condition_ii: Option<ConditionIIReport>,
    pub tolerances: Tolerances,
}

impl Certificate {
    pub fn condition_i_verdict(&self) -> ConditionIVerdict {
        self.condition_i.as_ref().map_or(ConditionIVerdict::Skipped, |c| c.verdict)
    }

    pub fn condition_ii_verdict(&self) -> Option<ConditionIIVerdict> {
        self.condition_ii.as_ref().map(|c| c.verdict)
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        let mut all = Vec::new();
        if let Some(c) = &self.condition_i {
            all.extend(c.witnesses.iter().cloned());
        }
        if let Some(c) = &self.condition_ii {
            all.extend(c.witnesses.iter().cloned());
        }
        all
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub certificate: Certificate,
    /// Both conditions hold, or both fail.
    pub agree: bool,
}

/// Rank of `ζI − T` and of its square, each measured against the scale
/// `|ζ| + ‖T‖` of the data it was formed from.
fn rank_pair(t: &ComplexMatrix, zeta: C64, rank_tol: f64) -> (usize, usize) {
    let reference = zeta.norm() + operator_norm(t);
    let a = t.scale_real(-1.0).shift(zeta);
    let a2 = a.matmul(&a);
    (numerical_rank_scaled(&a, rank_tol, reference), numerical_rank_scaled(&a2, rank_tol, reference * reference))
}

/// Spectral side: `σ(T) ⊂ {Re ζ ≤ 1}` and `X = Ker(I−T) ⊕ Im(I−T)`.
///
/// A failing decomposition is reported ahead of an escaping spectrum when
/// both occur; all witnesses are kept either way.
pub fn check_condition_ii(t: &ComplexMatrix, tol: &Tolerances) -> Result<ConditionIIReport> {
    let n = t.square_dim()?;
    let rank_tol = tol.rank_tol_for(n);
    let eig = eigendecompose(t)?;
    let slack = tol.tol * operator_norm(t);
    let max_real_part = eig.rightmost();

    let mut witnesses = Vec::new();
    if let Some(z) = max_real_part {
        witnesses.push(Witness::MaxRealPart(z));
    }
    let escaping: Vec<C64> = eig.values.iter().copied().filter(|z| z.re > 1.0 + slack).collect();
    witnesses.extend(escaping.iter().map(|&z| Witness::OffendingEigenvalue(z)));

    let one = C64::new(1.0, 0.0);
    let (rank_first, rank_second) = rank_pair(t, one, rank_tol);
    let mut decomposition_ok = rank_first == rank_second;
    if !decomposition_ok {
        witnesses.push(Witness::RankGap { at: one, first: rank_first, second: rank_second });
    }
    let projection = match riesz_projection_at_one(t, rank_tol) {
        Ok(p) => Some(p),
        Err(Error::DecompositionFails(msg)) => {
            decomposition_ok = false;
            witnesses.push(Witness::StackTest(msg));
            None
        }
        Err(e) => return Err(e),
    };

    let verdict = if !decomposition_ok {
        ConditionIIVerdict::DecompositionFails
    } else if !escaping.is_empty() {
        ConditionIIVerdict::SpectrumEscapes
    } else {
        ConditionIIVerdict::Holds
    };
    Ok(ConditionIIReport { verdict, max_real_part, rank_first, rank_second, projection, witnesses })
}

/// Dynamical side: power iteration of `A_α` for every `α` in `alphas`.
/// An empty `alphas` list yields a skipped verdict.
pub fn check_condition_i(t: &ComplexMatrix, alphas: &[AbelParameter], tol: &Tolerances) -> Result<ConditionIReport> {
    t.square_dim()?;
    if alphas.is_empty() {
        return Ok(ConditionIReport {
            verdict: ConditionIVerdict::Skipped,
            evidence: Vec::new(),
            limit: None,
            witnesses: Vec::new(),
        });
    }
    let mut evidence = Vec::with_capacity(alphas.len());
    let mut witnesses = Vec::new();
    for &p in alphas {
        let alpha = p.value();
        let a = match abel_average(t, p) {
            Ok(a) => a,
            Err(Error::ResolventPole(_)) => {
                witnesses.push(Witness::ResolventPole { alpha });
                evidence.push(AlphaEvidence {
                    alpha,
                    converged: false,
                    resolvent_pole: true,
                    steps: 0,
                    final_increment: None,
                    divergence_reason: None,
                    limit: None,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let report = power_iterate(&a, tol.tol, tol.max_doublings)?;
        if let Some(reason) = report.divergence_reason {
            witnesses.push(Witness::Divergence { alpha, reason, exponent: report.steps });
        }
        evidence.push(AlphaEvidence {
            alpha,
            converged: report.converged,
            resolvent_pole: false,
            steps: report.steps,
            final_increment: report.history.last().map(|&(_, d)| d),
            divergence_reason: report.divergence_reason,
            limit: report.limit,
        });
    }

    let all_converged = evidence.iter().all(|e| e.converged);
    if all_converged {
        for i in 0..evidence.len() {
            for j in i + 1..evidence.len() {
                let (a, b) = (evidence[i].limit.as_ref().unwrap(), evidence[j].limit.as_ref().unwrap());
                let distance = operator_norm(&(a - b));
                let scale = operator_norm(a).max(1.0);
                if distance > 10.0 * tol.tol * scale {
                    witnesses.push(Witness::LimitMismatch {
                        alpha_a: evidence[i].alpha,
                        alpha_b: evidence[j].alpha,
                        distance,
                    });
                }
            }
        }
    }
    let verdict = if all_converged && witnesses.is_empty() {
        ConditionIVerdict::ConvergedAll
    } else {
        ConditionIVerdict::Diverged
    };
    let limit = match verdict {
        ConditionIVerdict::ConvergedAll => evidence[0].limit.clone(),
        _ => None,
    };
    Ok(ConditionIReport { verdict, evidence, limit, witnesses })
}

/// Runs both checks. Disagreement points at a tolerance problem, never at
/// a counterexample.
pub fn verify_equivalence(t: &ComplexMatrix, alphas: &[AbelParameter], tol: &Tolerances) -> Result<EquivalenceReport> {
    let ci = check_condition_i(t, alphas, tol)?;
    let cii = check_condition_ii(t, tol)?;
    let agree = match ci.verdict {
        ConditionIVerdict::Skipped => true,
        v => (v == ConditionIVerdict::ConvergedAll) == (cii.verdict == ConditionIIVerdict::Holds),
    };
    Ok(EquivalenceReport {
        certificate: Certificate { condition_i: Some(ci), condition_ii: Some(cii), tolerances: *tol },
        agree,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// `(n, ‖Tⁿ‖/n)` for `n = 1, 2, 4, …`.
    pub samples: Vec<(u64, f64)>,
    /// Decreasing tail and final sample below a tenth of the first.
    pub heuristic_holds: bool,
    /// Spectral radius ≤ 1 and every unimodular eigenvalue semisimple.
    pub exact_holds: bool,
    pub spectral_radius: f64,
    pub witnesses: Vec<Witness>,
}

/// Sampled `‖Tⁿ‖/n` together with the exact spectral test for `‖Tⁿ/n‖ → 0`.
pub fn check_power_growth(t: &ComplexMatrix, n_max: u64, tol: &Tolerances) -> Result<GrowthReport> {
    let n = t.square_dim()?;
    if n_max < 4 {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} must be at least 4")));
    }
    let rank_tol = tol.rank_tol_for(n);
    let mut witnesses = Vec::new();

    let mut samples = Vec::new();
    let mut overflowed = false;
    let mut power = t.clone();
    let mut exponent = 1u64;
    while exponent <= n_max {
        let norm = operator_norm(&power);
        if !norm.is_finite() || norm > BLOW_UP_THRESHOLD * exponent as f64 {
            witnesses.push(Witness::GrowthOverflow { n: exponent });
            overflowed = true;
            break;
        }
        samples.push((exponent, norm / exponent as f64));
        match exponent.checked_mul(2) {
            Some(next) => exponent = next,
            None => break,
        }
        power = power.matmul(&power);
    }
    let heuristic_holds = !overflowed
        && samples.len() >= 2
        && samples.windows(2).last().is_some_and(|w| w[1].1 < w[0].1)
        && samples.last().unwrap().1 < 0.1 * samples[0].1.max(f64::MIN_POSITIVE);

    let eig = eigendecompose(t)?;
    let spectral_radius = eig.spectral_radius();
    let slack = tol.tol * operator_norm(t).max(1.0);
    witnesses.push(Witness::SpectralRadius(spectral_radius));
    let mut exact_holds = spectral_radius <= 1.0 + slack;
    if !exact_holds {
        witnesses.push(Witness::OffendingEigenvalue(
            eig.values.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap(),
        ));
    }
    for (mean, _) in eig.clusters(tol.cluster_radius) {
        if (mean.norm() - 1.0).abs() <= tol.cluster_radius {
            let (first, second) = rank_pair(t, mean, rank_tol);
            if first != second {
                exact_holds = false;
                witnesses.push(Witness::RankGap { at: mean, first, second });
            }
        }
    }
    Ok(GrowthReport { samples, heuristic_holds, exact_holds, spectral_radius, witnesses })
}

/// Largest norm seen over a finite sweep. A finite value is evidence, not a
/// proof of boundedness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    /// `+∞` when the sweep overflowed.
    pub value: f64,
    pub argmax: u64,
    pub horizon: u64,
}

impl SupEstimate {
    pub const NOTE: &'static str = "finite sweep; bounded sweeps do not prove boundedness";
}

fn track(best: &mut SupEstimate, norm: f64, n: u64) -> bool {
    if !norm.is_finite() {
        best.value = f64::INFINITY;
        best.argmax = n;
        return false;
    }
    if norm > best.value {
        best.value = norm;
        best.argmax = n;
    }
    true
}

/// `max_{1≤N≤N_max} ‖N⁻¹ Σ_{n<N} Tⁿ‖`.
pub fn cesaro_sup_estimate(t: &ComplexMatrix, n_max: u64) -> Result<SupEstimate> {
    let n = t.square_dim()?;
    if n_max == 0 {
        return Err(Error::InvalidParameter("N_max must be at least 1".into()));
    }
    let mut best = SupEstimate { value: 0.0, argmax: 1, horizon: n_max };
    let mut power = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::zeros(n, n);
    for count in 1..=n_max {
        sum = &sum + &power;
        if !track(&mut best, operator_norm(&sum) / count as f64, count) {
            break;
        }
        power = power.matmul(t);
    }
    Ok(best)
}

/// `max_α max_{0≤N≤N_max} ‖(1−α) Σ_{n≤N} αⁿTⁿ‖` over the given `α` grid.
pub fn abel_partial_sup_estimate(t: &ComplexMatrix, alphas: &[AbelParameter], n_max: u64) -> Result<SupEstimate> {
    let n = t.square_dim()?;
    if n_max == 0 {
        return Err(Error::InvalidParameter("N_max must be at least 1".into()));
    }
    let mut best = SupEstimate { value: 0.0, argmax: 0, horizon: n_max };
    'alphas: for &p in alphas {
        let alpha = p.value();
        let step = t.scale_real(alpha);
        let mut term = ComplexMatrix::identity(n).scale_real(1.0 - alpha);
        let mut sum = ComplexMatrix::zeros(n, n);
        for k in 0..=n_max {
            sum = &sum + &term;
            if !track(&mut best, operator_norm(&sum), k) {
                break 'alphas;
            }
            term = term.matmul(&step);
        }
    }
    Ok(best)
}

/// `max Re W(T)`.
pub fn numerical_range_real_bound(t: &ComplexMatrix) -> Result<f64> {
    hermitian_part_max_eig(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    pub alpha: f64,
    /// Angle between `Ker(I − A_α)` and `Ker(I − T)`.
    pub kernel_angle: f64,
    /// Angle between `Im(I − A_α)` and `Im(I − T)`.
    pub image_angle: f64,
    pub pass: bool,
}

/// Compares kernel and image of `I − A_α` with those of `I − T`.
pub fn kernel_image_transfer_check(t: &ComplexMatrix, p: AbelParameter, rank_tol: f64) -> Result<TransferReport> {
    let a = abel_average(t, p)?;
    let (lhs, lhs_ref) = (a.identity_minus(), operator_norm(&a).max(1.0));
    let (rhs, rhs_ref) = (t.identity_minus(), operator_norm(t).max(1.0));
    let kernel_angle = max_principal_angle(
        &kernel_basis_scaled(&lhs, rank_tol, lhs_ref),
        &kernel_basis_scaled(&rhs, rank_tol, rhs_ref),
    );
    let image_angle = max_principal_angle(
        &image_basis_scaled(&lhs, rank_tol, lhs_ref),
        &image_basis_scaled(&rhs, rank_tol, rhs_ref),
    );
    Ok(TransferReport {
        alpha: p.value(),
        kernel_angle,
        image_angle,
        pass: kernel_angle <= TRANSFER_ANGLE_TOL && image_angle <= TRANSFER_ANGLE_TOL,
    })
}

/// `‖cesaro_average(T, N) − E‖` against a reference projection.
pub fn cesaro_defect(t: &ComplexMatrix, count: u64, reference: &ComplexMatrix) -> Result<f64> {
    Ok(operator_norm(&(&cesaro_average(t, count)? - reference)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphas() -> Vec<AbelParameter> {
        [0.1, 0.5, 0.9].iter().map(|&a| AbelParameter::new(a).unwrap()).collect()
    }

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])
    }

    #[test]
    fn condition_ii_examples() {
        let tol = Tolerances::default();
        let t = ComplexMatrix::from_diagonal(&[C64::new(1.0, 0.0), C64::new(0.2, 0.0), C64::new(-5.0, 3.0)]);
        assert_eq!(check_condition_ii(&t, &tol).unwrap().verdict, ConditionIIVerdict::Holds);

        let r = check_condition_ii(&jordan(), &tol).unwrap();
        assert_eq!(r.verdict, ConditionIIVerdict::DecompositionFails);
        assert_eq!((r.rank_first, r.rank_second), (1, 0));
        assert!(r.witnesses.iter().any(|w| matches!(w, Witness::RankGap { first: 1, second: 0, .. })));

        let r = check_condition_ii(&ComplexMatrix::from_real_diagonal(&[1.5]), &tol).unwrap();
        assert_eq!(r.verdict, ConditionIIVerdict::SpectrumEscapes);
        assert!(r.witnesses.contains(&Witness::OffendingEigenvalue(C64::new(1.5, 0.0))));
    }

    #[test]
    fn condition_i_examples() {
        let tol = Tolerances::default();
        let r = check_condition_i(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), &alphas(), &tol).unwrap();
        assert_eq!(r.verdict, ConditionIVerdict::ConvergedAll);
        let want = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(operator_norm(&(r.limit.as_ref().unwrap() - &want)) < 1e-9);

        let r = check_condition_i(&jordan(), &alphas(), &tol).unwrap();
        assert_eq!(r.verdict, ConditionIVerdict::Diverged);
        assert!(r.evidence.iter().all(|e| !e.converged));

        let r = check_condition_i(&ComplexMatrix::zeros(3, 3), &alphas(), &tol).unwrap();
        assert_eq!(r.verdict, ConditionIVerdict::ConvergedAll);
        assert!(r.limit.unwrap().max_abs() < 1e-10);

        let r = check_condition_i(&ComplexMatrix::zeros(3, 3), &[], &tol).unwrap();
        assert_eq!(r.verdict, ConditionIVerdict::Skipped);
    }

    #[test]
    fn equivalence_examples() {
        let tol = Tolerances::default();
        let t = ComplexMatrix::from_diagonal(&[C64::new(1.0, 0.0), C64::new(0.5, -0.5)]);
        let r = verify_equivalence(&t, &alphas(), &tol).unwrap();
        assert!(r.agree);
        assert_eq!(r.certificate.condition_i_verdict(), ConditionIVerdict::ConvergedAll);

        let r = verify_equivalence(&jordan(), &alphas(), &tol).unwrap();
        assert!(r.agree);
        assert_eq!(r.certificate.condition_ii_verdict(), Some(ConditionIIVerdict::DecompositionFails));

        let r = verify_equivalence(&ComplexMatrix::from_real_diagonal(&[2.0]), &alphas(), &tol).unwrap();
        assert!(r.agree);
        let ci = r.certificate.condition_i.as_ref().unwrap();
        assert!(ci.evidence.iter().any(|e| e.resolvent_pole && e.alpha == 0.5));
        assert_eq!(r.certificate.condition_ii_verdict(), Some(ConditionIIVerdict::SpectrumEscapes));
    }

    #[test]
    fn negative_verdicts_carry_witnesses() {
        let tol = Tolerances::default();
        for t in [jordan(), ComplexMatrix::from_real_diagonal(&[2.0]), ComplexMatrix::from_real_diagonal(&[1.5, 0.0])] {
            let r = verify_equivalence(&t, &alphas(), &tol).unwrap();
            let c = &r.certificate;
            assert!(c.condition_i.as_ref().unwrap().witnesses.iter().any(Witness::is_negative));
            assert!(c.condition_ii.as_ref().unwrap().witnesses.iter().any(Witness::is_negative));
        }
    }

    #[test]
    fn growth_examples() {
        let tol = Tolerances::default();
        let r = check_power_growth(&ComplexMatrix::identity(2), 64, &tol).unwrap();
        assert_eq!(r.samples[..3], [(1, 1.0), (2, 0.5), (4, 0.25)]);
        assert!(r.heuristic_holds && r.exact_holds);

        let r = check_power_growth(&jordan(), 1 << 20, &tol).unwrap();
        assert!(!r.heuristic_holds && !r.exact_holds);
        assert!((r.samples.last().unwrap().1 - 1.0).abs() < 1e-5);
        assert!(r.witnesses.iter().any(|w| matches!(w, Witness::RankGap { first: 1, second: 0, .. })));

        let r = check_power_growth(&ComplexMatrix::from_real_diagonal(&[2.0]), 1 << 40, &tol).unwrap();
        assert!(!r.heuristic_holds && !r.exact_holds);
        assert!(r.witnesses.iter().any(|w| matches!(w, Witness::GrowthOverflow { .. })));

        assert!(check_power_growth(&jordan(), 3, &tol).is_err());
    }

    #[test]
    fn rotation_is_semisimple_on_the_circle() {
        let t = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let r = check_power_growth(&t, 1024, &Tolerances::default()).unwrap();
        assert!(r.exact_holds && r.heuristic_holds);
    }

    #[test]
    fn sup_estimates() {
        let id = ComplexMatrix::identity(2);
        assert!((cesaro_sup_estimate(&id, 50).unwrap().value - 1.0).abs() < 1e-15);
        let minus = id.scale_real(-1.0);
        let s = cesaro_sup_estimate(&minus, 50).unwrap();
        assert!((s.value - 1.0).abs() < 1e-15);
        assert_eq!(s.argmax, 1);
        let p = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!((cesaro_sup_estimate(&p, 30).unwrap().value - 1.0).abs() < 1e-15);

        let a = abel_partial_sup_estimate(&id, &alphas(), 200).unwrap();
        assert!(a.value <= 1.0 + 1e-12 && a.value > 0.99);
        let a = abel_partial_sup_estimate(&minus, &alphas(), 200).unwrap();
        assert!(a.value <= 1.0);

        let blow = cesaro_sup_estimate(&ComplexMatrix::from_real_diagonal(&[1e200]), 5).unwrap();
        assert!(blow.value.is_infinite());
    }

    #[test]
    fn numerical_range_examples() {
        assert!((numerical_range_real_bound(&ComplexMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-15);
        let t = ComplexMatrix::from_diagonal(&[C64::new(0.0, 1.0), C64::new(0.0, -1.0)]);
        assert!(numerical_range_real_bound(&t).unwrap().abs() < 1e-15);
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((numerical_range_real_bound(&t).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn transfer_examples() {
        let half = AbelParameter::new(0.5).unwrap();
        let t = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        let r = kernel_image_transfer_check(&t, half, 1e-12).unwrap();
        assert!(r.pass && r.kernel_angle < 1e-15 && r.image_angle < 1e-15);

        let r = kernel_image_transfer_check(&ComplexMatrix::identity(3), half, 1e-12).unwrap();
        assert!(r.pass && r.kernel_angle == 0.0);

        let mut rng = generate::rng_from_seed(42);
        let (s, s_inv, _) = generate::random_similarity(&mut rng, 3, 10.0);
        let t = s.matmul(&ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.2])).matmul(&s_inv);
        for a in alphas() {
            assert!(kernel_image_transfer_check(&t, a, 1e-9).unwrap().pass);
        }

        assert!(matches!(
            kernel_image_transfer_check(&ComplexMatrix::from_real_diagonal(&[2.0]), half, 1e-12),
            Err(Error::ResolventPole(_))
        ));
    }
}
