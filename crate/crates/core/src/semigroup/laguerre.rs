//! Gauss rules for the weight `u^a·e^{−u}` on `[0, ∞)`.

use faer::{Mat, Side};

use crate::{Error, Result};

/// Nodes and log-weights of a Gauss–Laguerre rule, normalized so that the
/// weights sum to one (the weight function is divided by `Γ(a + 1)`).
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreRule {
    pub exponent: u32,
    pub nodes: Vec<f64>,
    pub log_weights: Vec<f64>,
}

impl LaguerreRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(xᵢ)` for a scalar integrand.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.log_weights).map(|(&x, &lw)| lw.exp() * f(x)).sum()
    }
}

/// `ln k!`, exact summation for the small arguments used here.
pub fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// `L_N^{(a)}(x)` and `L_{N−1}^{(a)}(x)` as `(mantissa_N, mantissa_{N−1}, log_scale)`.
/// The three-term recurrence is rescaled whenever it grows past `1e150`.
fn laguerre_pair(n: usize, a: f64, x: f64) -> (f64, f64, f64) {
    let mut prev = 1.0;
    let mut curr = 1.0 + a - x;
    let mut log_scale = 0.0;
    if n == 0 {
        return (prev, 0.0, 0.0);
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * curr - (k + a) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
        let m = curr.abs().max(prev.abs());
        if m > 1e150 {
            prev /= m;
            curr /= m;
            log_scale += m.ln();
        }
    }
    (curr, prev, log_scale)
}

/// Golub–Welsch eigenvalues of the Jacobi matrix, refined by Newton steps on
/// `L_N^{(a)}`; weights from `w = Γ(N+a+1)·x / (N!·(N+a)²·L_{N−1}(x)²)`.
pub fn gauss_laguerre(n: usize, exponent: u32) -> Result<LaguerreRule> {
    if n == 0 {
        return Err(Error::InvalidParameter("a Gauss rule needs at least one node".into()));
    }
    let a = exponent as f64;
    let jacobi = Mat::<f64>::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0 + a
        } else if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            (k * (k + a)).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes = jacobi.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)?;
    nodes.sort_by(f64::total_cmp);

    let nf = n as f64;
    let mut log_weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (ln, lm1, _) = laguerre_pair(n, a, *x);
            let derivative = (nf * ln - (nf + a) * lm1) / *x;
            if derivative == 0.0 || !derivative.is_finite() {
                break;
            }
            let step = ln / derivative;
            if !(step.abs() < 1e-3 * x.abs().max(1e-300)) {
                break;
            }
            *x -= step;
        }
        let (_, lm1, log_scale) = laguerre_pair(n, a, *x);
        let log_gamma_ratio = ln_factorial(n as u64 + exponent as u64) - ln_factorial(n as u64) - ln_factorial(exponent as u64);
        let lw = log_gamma_ratio + x.ln() - 2.0 * (nf + a).ln() - 2.0 * (lm1.abs().ln() + log_scale);
        log_weights.push(lw);
    }
    // The recurrence loses a few ulps near the smallest roots; renormalizing
    // restores the exact total mass without touching relative accuracy.
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_mass = max + log_weights.iter().map(|w| (w - max).exp()).sum::<f64>().ln();
    log_weights.iter_mut().for_each(|w| *w -= log_mass);
    Ok(LaguerreRule { exponent, nodes, log_weights })
}
