//! The continuous-time side: `T_t = exp(tB)`, its Abel average
//! `Ã_λ = λ∫₀^∞ e^{−λs} T_s ds = λ(λI − B)⁻¹`, the integral formula for the
//! powers `Ã_λⁿ`, and the substitution `α = 1/(1+λ)`, `T = I + B` that turns
//! the continuous average into the discrete one.

pub mod laguerre;

use crate::abel::{abel_average, power_iterate, AbelParameter, ConvergenceReport, DEFAULT_MAX_DOUBLINGS};
use crate::linalg::{eigendecompose, matrix_exponential, operator_norm, solve_linear, ComplexMatrix, C64};
use crate::{Error, Result};

use laguerre::{gauss_laguerre, ln_factorial};

/// Relative disagreement between the `n`- and `2n`-point rules above which a
/// quadrature is reported as unstable.
pub const SELF_CHECK_TOL: f64 = 1e-6;

/// The generator `B` of `T_t = exp(tB)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix(ComplexMatrix);

impl GeneratorMatrix {
    pub fn new(b: ComplexMatrix) -> Result<Self> {
        b.square_dim()?;
        if !b.is_finite() {
            return Err(Error::InvalidParameter("generator has non-finite entries".into()));
        }
        Ok(Self(b))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// `max Re σ(B)`, the exponential growth rate of `‖T_t‖`.
    pub fn spectral_abscissa(&self) -> Result<f64> {
        Ok(eigendecompose(&self.0)?.spectral_abscissa())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    GaussLaguerre,
    TruncatedSimpson,
}

impl QuadratureScheme {
    pub fn tag(self) -> &'static str {
        match self {
            QuadratureScheme::GaussLaguerre => "gauss_laguerre",
            QuadratureScheme::TruncatedSimpson => "truncated_simpson",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "gauss_laguerre" => Some(QuadratureScheme::GaussLaguerre),
            "truncated_simpson" => Some(QuadratureScheme::TruncatedSimpson),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss nodes, or Simpson panels (rounded up to even).
    pub node_count: usize,
    /// Simpson truncation horizon in units of `1/λ`.
    pub t_max_factor: f64,
    pub scheme: QuadratureScheme,
}

impl QuadratureSpec {
    pub fn new(node_count: usize, t_max_factor: f64, scheme: QuadratureScheme) -> Result<Self> {
        if node_count < 8 {
            return Err(Error::InvalidParameter(format!("node_count = {node_count} is below 8")));
        }
        if !(t_max_factor >= 10.0) || !t_max_factor.is_finite() {
            return Err(Error::InvalidParameter(format!("t_max_factor = {t_max_factor} is below 10")));
        }
        Ok(Self { node_count, t_max_factor, scheme })
    }

    pub fn gauss_laguerre(node_count: usize) -> Result<Self> {
        Self::new(node_count, 40.0, QuadratureScheme::GaussLaguerre)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { node_count: 64, t_max_factor: 40.0, scheme: QuadratureScheme::GaussLaguerre }
    }
}

/// A quadrature value together with its node-doubling self-check.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOutcome {
    /// Result with the requested node count.
    pub value: ComplexMatrix,
    /// `‖Q_n − Q_{2n}‖ / ‖Q_{2n}‖`.
    pub self_check_defect: f64,
    /// Time scale `κ` of the substitution `u = κs` (Gauss–Laguerre only).
    pub time_scale: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive and finite")))
    }
}

/// `T_t = exp(tB)`.
pub fn semigroup_at(g: &GeneratorMatrix, t: f64) -> Result<ComplexMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time t = {t} must be non-negative")));
    }
    matrix_exponential(g.matrix(), t)
}

/// `Ã_λ = λ(λI − B)⁻¹`.
pub fn abel_average_closed(g: &GeneratorMatrix, lambda: f64) -> Result<ComplexMatrix> {
    check_lambda(lambda)?;
    let n = g.dim();
    let shifted = g.matrix().scale_real(-1.0).shift(C64::new(lambda, 0.0));
    match solve_linear(&shifted, &ComplexMatrix::identity(n)) {
        Ok(r) => Ok(r.scale_real(lambda)),
        Err(Error::SingularMatrix { .. }) => {
            Err(Error::ResolventPole(format!("lambda = {lambda} is numerically an eigenvalue of B")))
        }
        Err(e) => Err(e),
    }
}

/// Sums in a fixed binary tree so that the rounding pattern does not depend
/// on how the terms were produced.
fn pairwise_sum(mut terms: Vec<ComplexMatrix>, n: usize) -> ComplexMatrix {
    if terms.is_empty() {
        return ComplexMatrix::zeros(n, n);
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => &a + &b,
                None => a,
            });
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// Time scale for `u = κs`: the geometric mean of the smallest and largest
/// `|λ − μ|` over `μ ∈ σ(B)`. With it the integrand decays at rates spread
/// evenly around `e^{−u}` instead of at `(λ − μ)/λ`, which for small `λ` and
/// stiff `B` would be far outside what a fixed rule resolves.
fn time_scale(spectrum: &[C64], lambda: f64) -> f64 {
    let (lo, hi) = spectrum.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &mu| {
        let d = (C64::new(lambda, 0.0) - mu).norm();
        (lo.min(d), hi.max(d))
    });
    if spectrum.is_empty() || lo <= 0.0 {
        lambda
    } else {
        (lo * hi).sqrt()
    }
}

fn precheck(g: &GeneratorMatrix, lambda: f64) -> Result<Vec<C64>> {
    check_lambda(lambda)?;
    let eig = eigendecompose(g.matrix())?;
    let abscissa = eig.spectral_abscissa();
    if g.dim() > 0 && abscissa >= lambda {
        return Err(Error::IntegralDiverges { abscissa, lambda });
    }
    Ok(eig.values)
}

/// `(λⁿ/(n−1)!) Σᵢ wᵢ sᵢ^{n−1} e^{−λsᵢ} T_{sᵢ}` with a Gauss–Laguerre rule for
/// the weight `u^{n−1}e^{−u}` after `u = κs`. Every node contributes
/// `exp(sᵢ(B + cᵢI))` where the scalar `cᵢ` carries the weight's logarithm,
/// so neither `(λ/κ)ⁿ` nor a tiny weight times a huge `T_s` is ever formed.
fn gauss_laguerre_power(b: &ComplexMatrix, lambda: f64, kappa: f64, power: u32, nodes: usize) -> Result<ComplexMatrix> {
    let n = b.rows();
    let rule = gauss_laguerre(nodes, power - 1)?;
    let log_prefactor = power as f64 * (lambda / kappa).ln();
    let mut terms = Vec::with_capacity(rule.len());
    for (&u, &lw) in rule.nodes.iter().zip(&rule.log_weights) {
        let s = u / kappa;
        let shift = (kappa - lambda) + (lw + log_prefactor) / s;
        terms.push(matrix_exponential(&b.shift(C64::new(shift, 0.0)), s)?);
    }
    Ok(pairwise_sum(terms, n))
}

/// Composite Simpson on `[0, H]`, `H = t_max_factor/λ`, with `T_{kh} = (e^{hB})^k`.
fn simpson_power(b: &ComplexMatrix, lambda: f64, power: u32, panels: usize, horizon: f64) -> Result<ComplexMatrix> {
    let n = b.rows();
    let panels = panels + panels % 2;
    let h = horizon / panels as f64;
    let step = matrix_exponential(b, h)?;
    let log_norm = power as f64 * lambda.ln() - ln_factorial(power as u64 - 1);
    let mut current = ComplexMatrix::identity(n);
    let mut terms = Vec::with_capacity(panels + 1);
    for k in 0..=panels {
        let s = k as f64 * h;
        let simpson = if k == 0 || k == panels { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let kernel = if power == 1 {
            (log_norm - lambda * s).exp()
        } else if s == 0.0 {
            0.0
        } else {
            (log_norm + (power as f64 - 1.0) * s.ln() - lambda * s).exp()
        };
        terms.push(current.scale_real(simpson * h / 3.0 * kernel));
        if k < panels {
            current = current.matmul(&step);
            if !current.is_finite() {
                return Err(Error::Overflow(format!("T_s overflows at s = {}", (k + 1) as f64 * h)));
            }
        }
    }
    Ok(pairwise_sum(terms, n))
}

/// `Ã_λⁿ` from the integral `(λⁿ/(n−1)!)∫₀^∞ e^{−λs} s^{n−1} T_s ds`, with the
/// node-doubling self-check exposed.
pub fn abel_power_quadrature_detailed(
    g: &GeneratorMatrix,
    lambda: f64,
    power: u32,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome> {
    if power == 0 {
        return Err(Error::InvalidParameter("the power n must be at least 1".into()));
    }
    let spectrum = precheck(g, lambda)?;
    let b = g.matrix();
    let (value, refined, time_scale) = match spec.scheme {
        QuadratureScheme::GaussLaguerre => {
            let kappa = time_scale(&spectrum, lambda);
            (
                gauss_laguerre_power(b, lambda, kappa, power, spec.node_count)?,
                gauss_laguerre_power(b, lambda, kappa, power, 2 * spec.node_count)?,
                kappa,
            )
        }
        QuadratureScheme::TruncatedSimpson => {
            let horizon = spec.t_max_factor / lambda;
            (
                simpson_power(b, lambda, power, spec.node_count, horizon)?,
                simpson_power(b, lambda, power, 2 * spec.node_count, horizon)?,
                lambda,
            )
        }
    };
    let scale = operator_norm(&refined);
    let diff = operator_norm(&(&value - &refined));
    let self_check_defect = if scale > 0.0 { diff / scale } else { diff };
    if !(self_check_defect <= SELF_CHECK_TOL) {
        return Err(Error::QuadratureUnstable { relative_defect: self_check_defect });
    }
    Ok(QuadratureOutcome { value, self_check_defect, time_scale })
}

/// `Ã_λ` by quadrature of `λ∫₀^∞ e^{−λs} T_s ds`.
pub fn abel_average_quadrature(g: &GeneratorMatrix, lambda: f64, spec: &QuadratureSpec) -> Result<ComplexMatrix> {
    Ok(abel_power_quadrature_detailed(g, lambda, 1, spec)?.value)
}

/// `Ã_λⁿ` by quadrature of the `s^{n−1}`-weighted integral.
pub fn abel_power_quadrature(g: &GeneratorMatrix, lambda: f64, power: u32, spec: &QuadratureSpec) -> Result<ComplexMatrix> {
    Ok(abel_power_quadrature_detailed(g, lambda, power, spec)?.value)
}

/// `‖A − B‖ / ‖B‖` (absolute when `B = 0`).
pub fn relative_defect(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    let scale = operator_norm(reference);
    let diff = operator_norm(&(a - reference));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BridgeReport {
    pub lambda: f64,
    pub alpha: f64,
    pub continuous: ComplexMatrix,
    pub discrete: ComplexMatrix,
    /// `‖Ã_λ − A_α(I + B)‖`.
    pub defect: f64,
    /// `defect / ‖Ã_λ‖`.
    pub relative_defect: f64,
}

/// Compares `Ã_λ` with the discrete average of `T = I + B` at `α = 1/(1+λ)`.
pub fn discrete_bridge(g: &GeneratorMatrix, lambda: f64) -> Result<BridgeReport> {
    let continuous = abel_average_closed(g, lambda)?;
    let alpha = 1.0 / (1.0 + lambda);
    let t = g.matrix().shift(C64::new(1.0, 0.0));
    let discrete = abel_average(&t, AbelParameter::new(alpha)?)?;
    let defect = operator_norm(&(&continuous - &discrete));
    let relative_defect = relative_defect(&discrete, &continuous);
    Ok(BridgeReport { lambda, alpha, continuous, discrete, defect, relative_defect })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogNormGrowth {
    /// `(t, log‖T_t‖ / t)`.
    pub samples: Vec<(f64, f64)>,
    /// Last sample within 0.01 of zero and no larger in modulus than the first.
    pub heuristic_holds: bool,
    /// `max Re σ(B)`, the exact limit of `log‖T_t‖/t`.
    pub spectral_bound: f64,
    /// First grid time at which `T_t` overflowed, if any.
    pub overflow_at: Option<f64>,
}

/// Samples `log‖T_t‖/t` on an increasing grid of positive times.
pub fn growth_log_norm(g: &GeneratorMatrix, t_grid: &[f64]) -> Result<LogNormGrowth> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("the time grid is empty".into()));
    }
    if t_grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("the time grid must be positive and strictly increasing".into()));
    }
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut overflow_at = None;
    for &t in t_grid {
        match semigroup_at(g, t) {
            Ok(m) => samples.push((t, operator_norm(&m).ln() / t)),
            Err(Error::Overflow(_)) => {
                overflow_at = Some(t);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let heuristic_holds = overflow_at.is_none()
        && match (samples.first(), samples.last()) {
            (Some(first), Some(last)) => last.1.abs() <= 0.01 && last.1.abs() <= first.1.abs(),
            _ => false,
        };
    let spectral_bound = g.spectral_abscissa()?;
    Ok(LogNormGrowth { samples, heuristic_holds, spectral_bound, overflow_at })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicReport {
    pub lambda: f64,
    pub convergence: ConvergenceReport,
    /// `‖B·L‖` for a converged limit `L`.
    pub kernel_defect: Option<f64>,
    /// The limit is annihilated by `B` to `10·tol·‖B‖`.
    pub projects_onto_kernel: bool,
}

/// Power iteration on `Ã_λ`, whose limit is the projection onto `Ker B` along `Im B`.
pub fn ergodic_projection_continuous(g: &GeneratorMatrix, lambda: f64, tol: f64) -> Result<ErgodicReport> {
    let a = abel_average_closed(g, lambda)?;
    let convergence = power_iterate(&a, tol, DEFAULT_MAX_DOUBLINGS)?;
    let b_norm = operator_norm(g.matrix());
    let kernel_defect = convergence.limit.as_ref().map(|l| operator_norm(&g.matrix().matmul(l)));
    let projects_onto_kernel = kernel_defect.is_some_and(|d| d <= 10.0 * tol * b_norm.max(f64::MIN_POSITIVE) || d == 0.0);
    Ok(ErgodicReport { lambda, convergence, kernel_defect, projects_onto_kernel })
}
