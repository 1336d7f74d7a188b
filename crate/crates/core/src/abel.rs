//! Abel and Cesàro averages, power iteration to the ergodic limit and the
//! projection onto `Ker(I − T)` along `Im(I − T)`.

use std::fmt;

use crate::linalg::{
    image_basis_scaled, inverse, kernel_basis_scaled, operator_norm, singular_values, solve_linear, ComplexMatrix,
    SubspaceBasis, C64,
};
use crate::{Error, Result};

/// Default Cauchy tolerance for [`power_iterate`].
pub const DEFAULT_POWER_TOL: f64 = 1e-10;
/// Norm beyond which a power sequence is declared to blow up.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;
pub const DEFAULT_MAX_DOUBLINGS: u32 = 60;

/// The averaging parameter `α`, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AbelParameter(f64);

impl AbelParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidParameter(format!("alpha = {alpha} is not in (0, 1)")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for AbelParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `A_α = (1 − α)(I − αT)⁻¹`.
pub fn abel_average(t: &ComplexMatrix, p: AbelParameter) -> Result<ComplexMatrix> {
    let n = t.square_dim()?;
    let alpha = p.value();
    let shifted = t.scale_real(-alpha).shift(C64::new(1.0, 0.0));
    match solve_linear(&shifted, &ComplexMatrix::identity(n)) {
        Ok(inv) => Ok(inv.scale_real(1.0 - alpha)),
        Err(Error::SingularMatrix { .. }) => Err(Error::ResolventPole(format!(
            "I - {alpha}·T is singular (1/alpha is numerically in the spectrum)"
        ))),
        Err(e) => Err(e),
    }
}

/// Partial sum `(1 − α)·Σ_{k=0}^{N} α^k T^k`, accumulated Horner style.
pub fn abel_series_partial(t: &ComplexMatrix, p: AbelParameter, terms: usize) -> Result<ComplexMatrix> {
    let n = t.square_dim()?;
    let alpha = p.value();
    let at = t.scale_real(alpha);
    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for _ in 0..terms {
        acc = &id + &at.matmul(&acc);
        if !acc.is_finite() {
            return Err(Error::Overflow("Abel partial sum left the representable range".into()));
        }
    }
    Ok(acc.scale_real(1.0 - alpha))
}

/// Cesàro mean `N⁻¹·Σ_{n<N} Tⁿ`, using `O(log N)` products.
pub fn cesaro_average(t: &ComplexMatrix, count: u64) -> Result<ComplexMatrix> {
    let n = t.square_dim()?;
    if count == 0 {
        return Err(Error::InvalidParameter("Cesaro average needs N >= 1".into()));
    }
    // invariant: sum = Σ_{k<m} T^k and power = T^m for the prefix m of N's bits
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut power = ComplexMatrix::identity(n);
    for bit in (0..64 - count.leading_zeros()).rev() {
        sum = &sum + &power.matmul(&sum);
        power = power.matmul(&power);
        if (count >> bit) & 1 == 1 {
            sum = &sum + &power;
            power = power.matmul(t);
        }
        if !sum.is_finite() || !power.is_finite() {
            return Err(Error::Overflow("Cesaro sum left the representable range".into()));
        }
    }
    Ok(sum.scale_real(1.0 / count as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceReason {
    /// Some power exceeded [`BLOW_UP_THRESHOLD`] in norm.
    BlowUp,
    /// The doubling budget ran out before the increments fell below tolerance.
    NoCauchy,
    /// Squaring stalled on a matrix that `M` does not fix (e.g. a period-two orbit).
    SpuriousLimit,
}

impl DivergenceReason {
    pub fn tag(self) -> &'static str {
        match self {
            DivergenceReason::BlowUp => "blow_up",
            DivergenceReason::NoCauchy => "no_cauchy",
            DivergenceReason::SpuriousLimit => "spurious_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    pub limit: Option<ComplexMatrix>,
    /// Exponent `2^k` at which the Cauchy test passed (or the last one tried).
    pub steps: u64,
    /// `(2^k, ‖M^{2^{k+1}} − M^{2^k}‖)` for every doubling performed.
    pub history: Vec<(u64, f64)>,
    pub divergence_reason: Option<DivergenceReason>,
}

impl ConvergenceReport {
    fn diverged(steps: u64, history: Vec<(u64, f64)>, reason: DivergenceReason) -> Self {
        Self { converged: false, limit: None, steps, history, divergence_reason: Some(reason) }
    }
}

/// Follows `M, M², M⁴, …` until successive iterates agree.
///
/// Convergence requires `‖M^{2^{k+1}} − M^{2^k}‖ ≤ tol·max(1, ‖M^{2^k}‖)`
/// and a candidate limit `L` that is idempotent and fixed by `M`, both to
/// `10·tol` at the same scale.
pub fn power_iterate(m: &ComplexMatrix, tol: f64, max_doublings: u32) -> Result<ConvergenceReport> {
    m.square_dim()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let max_doublings = max_doublings.min(63);
    let m_norm = operator_norm(m);
    let mut history = Vec::new();
    if !m.is_finite() || m_norm > BLOW_UP_THRESHOLD {
        return Ok(ConvergenceReport::diverged(1, history, DivergenceReason::BlowUp));
    }

    let mut current = m.clone();
    let mut current_norm = m_norm;
    for k in 0..max_doublings {
        let exponent = 1u64 << k;
        let next = current.matmul(&current);
        let next_norm = operator_norm(&next);
        if !next.is_finite() || next_norm > BLOW_UP_THRESHOLD {
            return Ok(ConvergenceReport::diverged(exponent, history, DivergenceReason::BlowUp));
        }
        let increment = operator_norm(&(&next - &current));
        history.push((exponent, increment));

        if increment <= tol * current_norm.max(1.0) {
            let limit = next;
            let scale = next_norm.max(1.0);
            let idempotency = operator_norm(&(&limit.matmul(&limit) - &limit));
            let fixed = operator_norm(&(&m.matmul(&limit) - &limit));
            if idempotency <= 10.0 * tol * scale * scale && fixed <= 10.0 * tol * scale * m_norm.max(1.0) {
                return Ok(ConvergenceReport {
                    converged: true,
                    limit: Some(limit),
                    steps: exponent,
                    history,
                    divergence_reason: None,
                });
            }
            return Ok(ConvergenceReport::diverged(exponent, history, DivergenceReason::SpuriousLimit));
        }
        current = next;
        current_norm = next_norm;
    }
    let steps = if max_doublings == 0 { 1 } else { 1u64 << (max_doublings - 1) };
    Ok(ConvergenceReport::diverged(steps, history, DivergenceReason::NoCauchy))
}

/// The projection onto `Ker(I − T)` along `Im(I − T)` with its basis witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszProjection {
    pub matrix: ComplexMatrix,
    pub kernel: SubspaceBasis,
    pub image: SubspaceBasis,
    /// `‖E² − E‖`.
    pub idempotency_defect: f64,
}

/// Builds `E = [K V]·diag(I, 0)·[K V]⁻¹` from orthonormal bases `K` of
/// `Ker(I − T)` and `V` of `Im(I − T)`. Singular values of `I − T` are
/// compared against `rank_tol·max(σ_max, ‖T‖, 1)`. Fails when the two subspaces do not
/// form a direct sum, which is exactly when 1 is a defective eigenvalue.
pub fn riesz_projection_at_one(t: &ComplexMatrix, rank_tol: f64) -> Result<RieszProjection> {
    let n = t.square_dim()?;
    let a = t.identity_minus();
    let reference = operator_norm(t).max(1.0);
    let kernel = kernel_basis_scaled(&a, rank_tol, reference);
    let image = image_basis_scaled(&a, rank_tol, reference);
    let k = kernel.dim();
    if k + image.dim() != n {
        return Err(Error::DecompositionFails(format!(
            "dim Ker(I-T) + dim Im(I-T) = {} + {} != {n}",
            k,
            image.dim()
        )));
    }
    let stack = kernel.vectors.hstack(&image.vectors);
    let s = singular_values(&stack);
    let (smax, smin) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    if n > 0 && smin <= rank_tol * smax {
        return Err(Error::DecompositionFails(format!(
            "Ker(I-T) and Im(I-T) intersect: smallest singular value of [K V] is {smin:e}"
        )));
    }
    let matrix = if k == 0 {
        ComplexMatrix::zeros(n, n)
    } else {
        let inv = match inverse(&stack) {
            Ok(inv) => inv,
            Err(Error::SingularMatrix { .. }) => {
                return Err(Error::DecompositionFails("stacked basis [K V] is singular".into()))
            }
            Err(e) => return Err(e),
        };
        kernel.vectors.matmul(&inv.row_block(0..k))
    };
    let idempotency_defect = operator_norm(&(&matrix.matmul(&matrix) - &matrix));
    Ok(RieszProjection { matrix, kernel, image, idempotency_defect })
}

/// `f_α(ζ) = (1 − α)/(1 − αζ)`.
pub fn spectral_map(zeta: C64, p: AbelParameter) -> Result<C64> {
    let alpha = p.value();
    let denom = C64::new(1.0, 0.0) - zeta * alpha;
    if denom.norm() <= 1e-14 * (alpha * zeta.norm()).max(1.0) {
        return Err(Error::PoleHit { re: zeta.re, im: zeta.im });
    }
    Ok(C64::new(1.0 - alpha, 0.0) / denom)
}

/// Membership in `Ω_α = {ζ : |αζ − 1| > 1 − α}`, the preimage of the open
/// unit disk under `f_α`.
pub fn in_omega_alpha(zeta: C64, p: AbelParameter) -> bool {
    let alpha = p.value();
    (zeta * alpha - 1.0).norm() > 1.0 - alpha
}

/// Membership in the half-plane `Re ζ ≤ 1 + slack`.
pub fn in_half_plane_pi(zeta: C64, slack: f64) -> bool {
    zeta.re <= 1.0 + slack
}

/// One point of an `α → 1⁻` sweep of the Abel averages.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSweepPoint {
    pub alpha: f64,
    pub norm: f64,
    /// Distance to the average at the previous α of the sweep.
    pub increment: Option<f64>,
}

/// Evaluates `A_α` along the given α values. Diagnostic only: no verdict
/// about the existence of `lim_{α→1⁻} A_α` is drawn from a finite sweep.
pub fn alpha_sweep(t: &ComplexMatrix, alphas: &[AbelParameter]) -> Result<Vec<AlphaSweepPoint>> {
    let mut out = Vec::with_capacity(alphas.len());
    let mut previous: Option<ComplexMatrix> = None;
    for &p in alphas {
        let a = abel_average(t, p)?;
        let increment = previous.as_ref().map(|prev| operator_norm(&(&a - prev)));
        out.push(AlphaSweepPoint { alpha: p.value(), norm: operator_norm(&a), increment });
        previous = Some(a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: f64) -> AbelParameter {
        AbelParameter::new(a).unwrap()
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        operator_norm(&(a - b)) <= tol
    }

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])
    }

    #[test]
    fn parameter_must_be_open_interval() {
        assert!(AbelParameter::new(0.0).is_err());
        assert!(AbelParameter::new(1.0).is_err());
        assert!(AbelParameter::new(f64::NAN).is_err());
        assert_eq!(alpha(0.25).value(), 0.25);
    }

    #[test]
    fn abel_average_examples() {
        for a in [0.1, 0.5, 0.9] {
            assert!(close(&abel_average(&ComplexMatrix::identity(3), alpha(a)).unwrap(), &ComplexMatrix::identity(3), 1e-15));
        }
        let zero = abel_average(&ComplexMatrix::zeros(2, 2), alpha(0.5)).unwrap();
        assert_eq!(zero, ComplexMatrix::identity(2).scale_real(0.5));
        let d = abel_average(&ComplexMatrix::from_real_diagonal(&[1.0, 0.5]), alpha(0.5)).unwrap();
        assert!(close(&d, &ComplexMatrix::from_real_diagonal(&[1.0, 2.0 / 3.0]), 1e-15));
    }

    #[test]
    fn abel_average_of_jordan_block() {
        let a = abel_average(&jordan(), alpha(0.5)).unwrap();
        assert!(close(&a, &jordan(), 1e-14));
        let a9 = abel_average(&jordan(), alpha(0.9)).unwrap();
        assert!((a9[(0, 1)].re - 9.0).abs() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        let t = ComplexMatrix::from_real_diagonal(&[2.0]);
        assert!(matches!(abel_average(&t, alpha(0.5)), Err(Error::ResolventPole(_))));
    }

    #[test]
    fn series_partial_sums() {
        let z = abel_series_partial(&ComplexMatrix::zeros(2, 2), alpha(0.5), 10).unwrap();
        assert_eq!(z, ComplexMatrix::identity(2).scale_real(0.5));
        let i = abel_series_partial(&ComplexMatrix::identity(2), alpha(0.5), 3).unwrap();
        assert!(close(&i, &ComplexMatrix::identity(2).scale_real(0.9375), 1e-15));
        let half = ComplexMatrix::from_real_diagonal(&[0.5]);
        let s = abel_series_partial(&half, alpha(0.5), 200).unwrap();
        assert!(close(&s, &abel_average(&half, alpha(0.5)).unwrap(), 1e-15));
        assert!((s[(0, 0)].re - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn series_overflow() {
        let big = ComplexMatrix::from_real_diagonal(&[1e3]);
        assert!(matches!(abel_series_partial(&big, alpha(0.9), 200), Err(Error::Overflow(_))));
    }

    #[test]
    fn cesaro_examples() {
        let id = ComplexMatrix::identity(2);
        assert!(close(&cesaro_average(&id, 7).unwrap(), &id, 1e-15));
        let minus = id.scale_real(-1.0);
        assert!(close(&cesaro_average(&minus, 2).unwrap(), &ComplexMatrix::zeros(2, 2), 0.0));
        let d = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert_eq!(cesaro_average(&d, 4).unwrap(), ComplexMatrix::from_real_diagonal(&[1.0, 0.25]));
        assert!(cesaro_average(&d, 0).is_err());
    }

    #[test]
    fn cesaro_matches_direct_sum() {
        let t = ComplexMatrix::from_row_major(
            2,
            2,
            vec![C64::new(0.3, 0.2), C64::new(0.5, 0.0), C64::new(-0.1, 0.4), C64::new(0.6, -0.1)],
        )
        .unwrap();
        for count in [1u64, 2, 3, 5, 8, 13, 100] {
            let mut direct = ComplexMatrix::zeros(2, 2);
            let mut p = ComplexMatrix::identity(2);
            for _ in 0..count {
                direct = &direct + &p;
                p = p.matmul(&t);
            }
            let direct = direct.scale_real(1.0 / count as f64);
            assert!(close(&cesaro_average(&t, count).unwrap(), &direct, 1e-14), "N = {count}");
        }
    }

    #[test]
    fn power_iterate_examples() {
        let r = power_iterate(&ComplexMatrix::from_real_diagonal(&[1.0, 0.5]), 1e-10, 60).unwrap();
        assert!(r.converged);
        assert!(close(&r.limit.unwrap(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), 1e-10));

        let r = power_iterate(&jordan(), 1e-10, 60).unwrap();
        assert!(!r.converged);
        assert_eq!(r.divergence_reason, Some(DivergenceReason::BlowUp));

        let r = power_iterate(&ComplexMatrix::zeros(3, 3), 1e-10, 60).unwrap();
        assert!(r.converged);
        assert_eq!(r.steps, 1);
        assert_eq!(r.limit.unwrap(), ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn power_iterate_rejects_period_two() {
        let r = power_iterate(&ComplexMatrix::from_real_diagonal(&[-1.0, 0.3]), 1e-10, 60).unwrap();
        assert!(!r.converged);
        assert_eq!(r.divergence_reason, Some(DivergenceReason::SpuriousLimit));
    }

    #[test]
    fn power_iterate_budget() {
        let r = power_iterate(&ComplexMatrix::from_real_diagonal(&[0.999999]), 1e-10, 3).unwrap();
        assert_eq!(r.divergence_reason, Some(DivergenceReason::NoCauchy));
        assert_eq!(r.history.len(), 3);
    }

    #[test]
    fn riesz_examples() {
        let e = riesz_projection_at_one(&ComplexMatrix::from_real_diagonal(&[1.0, 0.3, -2.0]), 1e-12).unwrap();
        assert!(close(&e.matrix, &ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]), 1e-15));
        assert_eq!(e.kernel.dim(), 1);
        assert_eq!(e.image.dim(), 2);
        assert!(matches!(riesz_projection_at_one(&jordan(), 1e-12), Err(Error::DecompositionFails(_))));
        let id = riesz_projection_at_one(&ComplexMatrix::identity(3), 1e-12).unwrap();
        assert!(close(&id.matrix, &ComplexMatrix::identity(3), 1e-15));
        let none = riesz_projection_at_one(&ComplexMatrix::from_real_diagonal(&[0.5, 2.0]), 1e-12).unwrap();
        assert_eq!(none.matrix, ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn riesz_oblique_projection() {
        // T = S·diag(1, 0)·S⁻¹ with a non-orthogonal S
        let t = ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 0.0]]);
        let e = riesz_projection_at_one(&t, 1e-12).unwrap();
        assert!(close(&e.matrix, &t, 1e-14));
        assert!(e.idempotency_defect < 1e-14);
        for j in 0..e.kernel.dim() {
            let k = e.kernel.vectors.column(j);
            let ek = e.matrix.matvec(&k);
            assert!(ek.iter().zip(&k).all(|(a, b)| (a - b).norm() < 1e-14));
        }
    }

    #[test]
    fn spectral_map_examples() {
        for a in [0.1, 0.5, 0.9] {
            assert!((spectral_map(C64::new(1.0, 0.0), alpha(a)).unwrap() - 1.0).norm() < 1e-15);
        }
        assert!((spectral_map(C64::new(0.0, 0.0), alpha(0.5)).unwrap() - 0.5).norm() < 1e-15);
        assert!((spectral_map(C64::new(-1.0, 0.0), alpha(0.5)).unwrap() - 1.0 / 3.0).norm() < 1e-15);
        assert!(matches!(spectral_map(C64::new(2.0, 0.0), alpha(0.5)), Err(Error::PoleHit { .. })));
    }

    #[test]
    fn region_membership() {
        assert!(!in_omega_alpha(C64::new(1.0, 0.0), alpha(0.5)));
        assert!(in_omega_alpha(C64::new(-1.0, 0.0), alpha(0.5)));
        assert!(in_omega_alpha(C64::new(2.0, 0.0), alpha(0.9)));
        assert!(in_half_plane_pi(C64::new(1.0, 0.0), 0.0));
        assert!(in_half_plane_pi(C64::new(1.0, 1e6), 0.0));
        assert!(!in_half_plane_pi(C64::new(1.001, 0.0), 0.0));
    }

    #[test]
    fn sweep_increments_shrink_for_semisimple_one() {
        let t = ComplexMatrix::from_real_diagonal(&[1.0, 0.2]);
        let alphas: Vec<_> = [0.9, 0.99, 0.999].iter().map(|&a| alpha(a)).collect();
        let sweep = alpha_sweep(&t, &alphas).unwrap();
        assert!(sweep[0].increment.is_none());
        assert!(sweep[2].increment.unwrap() < sweep[1].increment.unwrap());
    }
}
