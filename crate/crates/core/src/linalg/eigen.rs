use std::cmp::Ordering;

use faer::Side;

use super::{ComplexMatrix, C64, MAX_DIMENSION};
use crate::{Error, Result};

/// Spectrum of a square matrix with algebraic multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenData {
    /// Sorted by descending real part, then descending modulus, then
    /// descending argument.
    pub values: Vec<C64>,
}

impl EigenData {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Largest real part, `-inf` for the empty spectrum.
    pub fn spectral_abscissa(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The eigenvalue with the largest real part.
    pub fn rightmost(&self) -> Option<C64> {
        self.values.first().copied()
    }

    /// Groups eigenvalues whose mutual distance chains stay within `radius`.
    /// Each group is returned as (mean, members).
    pub fn clusters(&self, radius: f64) -> Vec<(C64, Vec<C64>)> {
        let n = self.values.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn find(label: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while label[r] != r {
                r = label[r];
            }
            label[i] = r;
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                if (self.values[i] - self.values[j]).norm() <= radius {
                    let (a, b) = (find(&mut label, i), find(&mut label, j));
                    if a != b {
                        label[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
        for i in 0..n {
            let root = find(&mut label, i);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, members)) => members.push(self.values[i]),
                None => groups.push((root, vec![self.values[i]])),
            }
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let mean = members.iter().sum::<C64>() / members.len() as f64;
                (mean, members)
            })
            .collect()
    }
}

fn spectral_order(a: &C64, b: &C64) -> Ordering {
    b.re.total_cmp(&a.re)
        .then_with(|| b.norm().total_cmp(&a.norm()))
        .then_with(|| b.arg().total_cmp(&a.arg()))
}

/// Eigenvalues of a square matrix via a complex Schur decomposition
/// (Hessenberg reduction followed by multishift QR sweeps).
pub fn eigendecompose(a: &ComplexMatrix) -> Result<EigenData> {
    let n = a.square_dim()?;
    if n > MAX_DIMENSION {
        return Err(Error::DimensionTooLarge { dim: n, max: MAX_DIMENSION });
    }
    if n == 0 {
        return Ok(EigenData { values: Vec::new() });
    }
    if !a.is_finite() {
        return Err(Error::Overflow("non-finite matrix passed to eigendecompose".into()));
    }
    let mut values = a.to_faer().eigenvalues().map_err(|_| Error::NoConvergence)?;
    values.sort_by(spectral_order);
    Ok(EigenData { values })
}

/// Largest eigenvalue of `(T + T*)/2`, i.e. `max Re W(T)` for the
/// numerical range `W(T)` in the Euclidean inner product.
pub fn hermitian_part_max_eig(t: &ComplexMatrix) -> Result<f64> {
    let n = t.square_dim()?;
    if n == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let h = (t + &t.adjoint()).scale_real(0.5);
    let values = h.to_faer().self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)?;
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}
