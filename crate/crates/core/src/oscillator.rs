//! Diagonal model of the closure of `d²/dt² + 2 − t²` on `L²(ℝ)`.
//!
//! In the Hermite basis the operator is `diag(1 − 2n)`, so resolvents and
//! their powers act coefficientwise. The grid routines check the Hermite
//! eigenpairs directly against the differential operator.

use crate::abel::{spectral_map, AbelParameter};
use crate::linalg::{ComplexMatrix, C64, MAX_DIMENSION};
use crate::{Error, Result};

/// Truncation used for the series bounds.
pub const DEFAULT_TRUNCATION: usize = 10_000;
/// Truncation used when the model is compared against dense matrix routines.
pub const MATRIX_TRUNCATION: usize = 64;
/// Distance to an eigenvalue below which a resolvent is refused.
pub const POLE_TOL: f64 = 1e-12;
/// Relative tolerance of the decomposition check.
pub const DECOMPOSITION_TOL: f64 = 1e-12;

/// The first `N_tr` Hermite modes, with eigenvalues `λ_n = 1 − 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalOscillator {
    truncation: usize,
}

impl Default for DiagonalOscillator {
    fn default() -> Self {
        Self { truncation: DEFAULT_TRUNCATION }
    }
}

impl DiagonalOscillator {
    pub fn new(truncation: usize) -> Result<Self> {
        if truncation < 2 {
            return Err(Error::InvalidParameter(format!("truncation {truncation} must be at least 2")));
        }
        Ok(Self { truncation })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        1.0 - 2.0 * n as f64
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.truncation).map(|n| self.eigenvalue(n)).collect()
    }

    /// Dense `diag(λ_0, …, λ_{N−1})`; only for truncations up to the dense limit.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.truncation > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge { dim: self.truncation, max: MAX_DIMENSION });
        }
        Ok(ComplexMatrix::from_real_diagonal(&self.eigenvalues()))
    }

    /// Dense orthogonal projection onto the ground state.
    pub fn ground_projection(&self) -> Result<ComplexMatrix> {
        if self.truncation > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge { dim: self.truncation, max: MAX_DIMENSION });
        }
        let mut d = vec![0.0; self.truncation];
        d[0] = 1.0;
        Ok(ComplexMatrix::from_real_diagonal(&d))
    }

    fn check_lambda(&self, lambda: f64) -> Result<()> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} is not finite")));
        }
        // The eigenvalues are the odd integers 1, −1, −3, … down to 1 − 2(N−1).
        let k = ((1.0 - lambda) / 2.0).round();
        if k >= 0.0 && (k as usize) < self.truncation && (lambda - (1.0 - 2.0 * k)).abs() <= POLE_TOL {
            return Err(Error::PoleHit { re: 1.0 - 2.0 * k, im: 0.0 });
        }
        if lambda <= 1.0 {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} must exceed 1")));
        }
        Ok(())
    }

    /// Diagonal of `[(λ − 1)R(λ, T)]^m`: entries `((λ − 1)/(λ − 1 + 2n))^m`.
    pub fn scaled_resolvent_power_diagonal(&self, lambda: f64, m: u32) -> Result<Vec<f64>> {
        self.check_lambda(lambda)?;
        let d = lambda - 1.0;
        Ok((0..self.truncation).map(|n| (d / (d + 2.0 * n as f64)).powi(m as i32)).collect())
    }

    /// Diagonal of `(1 − α)(I − αT)⁻¹`, i.e. `f_α(1 − 2n)`.
    pub fn abel_diagonal(&self, p: AbelParameter) -> Result<Vec<C64>> {
        (0..self.truncation).map(|n| spectral_map(C64::new(self.eigenvalue(n), 0.0), p)).collect()
    }
}

/// Coefficients `α_n` of a vector in the Hermite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    coeffs: Vec<C64>,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(len: usize) -> Self {
        Self { coeffs: vec![C64::new(0.0, 0.0); len] }
    }

    /// The `k`-th unit vector of length `len`.
    pub fn basis(len: usize, k: usize) -> Result<Self> {
        if k >= len {
            return Err(Error::InvalidParameter(format!("basis index {k} out of range for length {len}")));
        }
        let mut v = Self::zeros(len);
        v.coeffs[k] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_len(&self, model: &DiagonalOscillator) -> Result<()> {
        if self.len() != model.truncation() {
            return Err(Error::DimensionMismatch { expected: model.truncation(), actual: self.len() });
        }
        Ok(())
    }
}

/// `R(λ, T)x`, dividing the n-th coefficient by `λ − 1 + 2n`.
pub fn resolvent_apply(model: &DiagonalOscillator, lambda: f64, x: &CoefficientVector) -> Result<CoefficientVector> {
    model.check_lambda(lambda)?;
    x.check_len(model)?;
    let coeffs = x.coeffs.iter().enumerate().map(|(n, c)| c / (lambda - model.eigenvalue(n))).collect();
    Ok(CoefficientVector { coeffs })
}

/// `‖(λ − 1)R(λ, T) − P₀‖ = (λ − 1)/(λ + 1)`.
pub fn first_order_gap(model: &DiagonalOscillator, lambda: f64) -> Result<f64> {
    Ok(scaled_resolvent_power_gap(model, lambda, 1)?.gap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerGap {
    pub lambda: f64,
    pub m: u32,
    /// Largest diagonal entry of `[(λ − 1)R]^m − P₀`, i.e. its operator norm.
    pub gap: f64,
    /// `((λ − 1)/(λ + 1))^m`.
    pub closed_form: f64,
    /// `((λ − 1)/(λ + 1))^{m−2}·C(λ)`, present for `m ≥ 4`.
    pub bound: Option<f64>,
}

/// Distance of `[(λ − 1)R(λ, T)]^m` from `P₀` on the truncation, next to the
/// series bound it is compared with.
pub fn scaled_resolvent_power_gap(model: &DiagonalOscillator, lambda: f64, m: u32) -> Result<PowerGap> {
    if m == 0 {
        return Err(Error::InvalidParameter("power m must be at least 1".into()));
    }
    let diag = model.scaled_resolvent_power_diagonal(lambda, m)?;
    let gap = diag[1..].iter().copied().fold(0.0, f64::max);
    let ratio = (lambda - 1.0) / (lambda + 1.0);
    let bound = if m >= 4 { Some(ratio.powi(m as i32 - 2) * c_constant(model, lambda)?.value) } else { None };
    Ok(PowerGap { lambda, m, gap, closed_form: ratio.powi(m as i32), bound })
}

/// `C(λ) = Σ_{n≥1} ((λ − 1)/(λ − 1 + 2n))²` from a truncated sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConstant {
    pub lambda: f64,
    /// Sum over `1 ≤ n < N_tr`.
    pub partial_sum: f64,
    /// Upper bound on the omitted terms, `∫_{N_tr−1}^∞ ((λ−1)/(λ−1+2u))² du`.
    pub tail_bound: f64,
    /// Partial sum plus the midpoint estimate `∫_{N_tr−1/2}^∞` of the omitted terms.
    pub value: f64,
    /// Half-width of the enclosure around `value`.
    pub uncertainty: f64,
}

impl SeriesConstant {
    /// `[partial_sum, partial_sum + tail_bound]` contains the full series.
    pub fn enclosure(&self) -> (f64, f64) {
        (self.partial_sum, self.partial_sum + self.tail_bound)
    }
}

pub fn c_constant(model: &DiagonalOscillator, lambda: f64) -> Result<SeriesConstant> {
    model.check_lambda(lambda)?;
    let d = lambda - 1.0;
    let n_tr = model.truncation();
    // Summed from the small terms upward.
    let partial_sum: f64 = (1..n_tr).rev().map(|n| (d / (d + 2.0 * n as f64)).powi(2)).sum();
    let tail_from = |u: f64| d * d / (2.0 * (d + 2.0 * u));
    let tail_bound = tail_from(n_tr as f64 - 1.0);
    let midpoint = tail_from(n_tr as f64 - 0.5);
    let lower = tail_from(n_tr as f64);
    Ok(SeriesConstant {
        lambda,
        partial_sum,
        tail_bound,
        value: partial_sum + midpoint,
        uncertainty: (midpoint - lower).max(tail_bound - midpoint),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    /// Preimage `y` with coefficients `α_n/(2n)`.
    pub preimage: CoefficientVector,
    /// `‖(I − T)y − x‖`.
    pub residual: f64,
    pub pass: bool,
}

/// Writes `x` with no ground-state component as `(I − T)y`.
pub fn kernel_image_decomposition_check(model: &DiagonalOscillator, x: &CoefficientVector) -> Result<DecompositionReport> {
    x.check_len(model)?;
    let norm = x.norm();
    let component = x.coeffs[0].norm();
    if component > DECOMPOSITION_TOL * norm {
        return Err(Error::NotInComplement { component });
    }
    let mut y = vec![C64::new(0.0, 0.0); x.len()];
    for n in 1..x.len() {
        y[n] = x.coeffs[n] / (2.0 * n as f64);
    }
    // (I − T) is multiplication by 1 − λ_n = 2n.
    let residual = y
        .iter()
        .zip(&x.coeffs)
        .enumerate()
        .map(|(n, (yn, xn))| (yn * (1.0 - model.eigenvalue(n)) - xn).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(DecompositionReport {
        preimage: CoefficientVector { coeffs: y },
        residual,
        pass: residual <= DECOMPOSITION_TOL * norm,
    })
}

/// `x_0(t), …, x_{count−1}(t)` by the normalized three-term recurrence.
pub fn hermite_functions(count: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let x0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * t * t).exp();
    out.push(x0);
    let mut prev = 0.0;
    let mut curr = x0;
    for n in 0..count.saturating_sub(1) {
        let nf = n as f64;
        let next = t * (2.0 / (nf + 1.0)).sqrt() * curr - (nf / (nf + 1.0)).sqrt() * prev;
        out.push(next);
        prev = curr;
        curr = next;
    }
    out
}

/// Orthonormal Hermite function `x_n(t)`.
pub fn hermite_function(n: usize, t: f64) -> f64 {
    hermite_functions(n + 1, t)[n]
}

/// Samples on the uniform grid `t_min, t_min + h, …, t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub t_min: f64,
    pub t_max: f64,
    pub h: f64,
    pub samples: Vec<f64>,
}

impl GridFunction {
    /// Grid on `[−half_width, half_width]`. The step is adjusted down so
    /// that it divides the interval exactly.
    pub fn symmetric(half_width: f64, h: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!("half width {half_width} must be positive")));
        }
        if !(h > 0.0 && h < half_width) {
            return Err(Error::InvalidGrid(format!("step {h} must lie in (0, {half_width})")));
        }
        let intervals = (2.0 * half_width / h).ceil() as usize;
        let h = 2.0 * half_width / intervals as f64;
        let samples = (0..=intervals).map(|i| f(-half_width + i as f64 * h)).collect::<Vec<_>>();
        Self::new(-half_width, half_width, h, samples)
    }

    pub fn new(t_min: f64, t_max: f64, h: f64, samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidGrid("a grid needs at least three points".into()));
        }
        let span = h * (samples.len() - 1) as f64;
        if !(h > 0.0) || ((t_max - t_min) - span).abs() > 1e-9 * (t_max - t_min).abs().max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "{} samples with step {h} do not span [{t_min}, {t_max}]",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self { t_min, t_max, h, samples })
    }

    pub fn hermite(n: usize, half_width: f64, h: f64) -> Result<Self> {
        Self::symmetric(half_width, h, |t| hermite_function(n, t))
    }

    pub fn point(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.h
    }

    /// Trapezoid rule for `∫ f·g`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.samples.len() != other.samples.len() || self.h != other.h || self.t_min != other.t_min {
            return Err(Error::InvalidGrid("inner product of functions on different grids".into()));
        }
        let last = self.samples.len() - 1;
        let sum: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .enumerate()
            .map(|(i, (a, b))| if i == 0 || i == last { 0.5 * a * b } else { a * b })
            .sum();
        Ok(sum * self.h)
    }

    /// `max_i |Δ_h² f + (2 − t²) f − μ f|` over interior points.
    pub fn operator_residual(&self, eigenvalue: f64) -> f64 {
        let h2 = self.h * self.h;
        let s = &self.samples;
        (1..s.len() - 1)
            .map(|i| {
                let t = self.point(i);
                let lap = (s[i + 1] - 2.0 * s[i] + s[i - 1]) / h2;
                (lap + (2.0 - t * t - eigenvalue) * s[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Residual of `T₀x_n = (1 − 2n)x_n` on the grid `[−L, L]` with step `h`.
pub fn eigen_residual(n: usize, half_width: f64, h: f64) -> Result<f64> {
    let needed = (2.0 * n as f64 + 1.0).sqrt() + 5.0;
    if half_width < needed {
        return Err(Error::InvalidGrid(format!(
            "half width {half_width} does not reach past the turning points of mode {n} (need {needed})"
        )));
    }
    let grid = GridFunction::hermite(n, half_width, h)?;
    let residual = grid.operator_residual(1.0 - 2.0 * n as f64);
    let bound = 100.0 * grid.h * grid.h * (2.0 * n as f64 + 3.0).powi(2);
    if residual > bound {
        return Err(Error::GridTooCoarse { residual, bound });
    }
    Ok(residual)
}

/// Trapezoid Gram matrix of `x_0, …, x_{count−1}` on `[−L, L]`.
pub fn gram_matrix(count: usize, half_width: f64, h: f64) -> Result<Vec<Vec<f64>>> {
    let grid = GridFunction::symmetric(half_width, h, |_| 0.0)?;
    let last = grid.samples.len() - 1;
    let mut gram = vec![vec![0.0; count]; count];
    for i in 0..=last {
        let w = if i == 0 || i == last { 0.5 * grid.h } else { grid.h };
        let values = hermite_functions(count, grid.point(i));
        for a in 0..count {
            for b in 0..=a {
                gram[a][b] += w * values[a] * values[b];
            }
        }
    }
    for a in 0..count {
        for b in 0..a {
            gram[b][a] = gram[a][b];
        }
    }
    Ok(gram)
}
