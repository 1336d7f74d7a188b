use super::{ComplexMatrix, C64};
use crate::{Error, Result};

/// LU factorization with partial (row) pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl LuFactorization {
    /// Factorizes a square matrix. A pivot of magnitude at most
    /// `n·ε·‖A‖_∞` is treated as zero and reported as `SingularMatrix`.
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.square_dim()?;
        let threshold = n as f64 * f64::EPSILON * a.norm_inf();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;

        for k in 0..n {
            let (p, magnitude) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if magnitude <= threshold {
                return Err(Error::SingularMatrix { pivot: k, magnitude });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A·X = rhs` for every column of `rhs`.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: rhs.rows(),
            });
        }
        let m = rhs.cols();
        let mut x = ComplexMatrix::zeros(n, m);
        for j in 0..m {
            let mut y: Vec<C64> = self.perm.iter().map(|&p| rhs[(p, j)]).collect();
            for i in 0..n {
                let mut acc = y[i];
                for k in 0..i {
                    acc -= self.lu[(i, k)] * y[k];
                }
                y[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = y[i];
                for k in i + 1..n {
                    acc -= self.lu[(i, k)] * y[k];
                }
                y[i] = acc / self.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, j)] = y[i];
            }
        }
        Ok(x)
    }

    pub fn determinant(&self) -> C64 {
        let prod: C64 = self.lu.diagonal().into_iter().product();
        prod * self.sign
    }
}

/// Solves `A·X = RHS` through a pivoted LU factorization.
pub fn solve_linear(a: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    LuFactorization::new(a)?.solve(rhs)
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    solve_linear(a, &ComplexMatrix::identity(n))
}

/// Determinant from the LU factors; zero when the factorization reports a
/// singular pivot.
pub fn determinant(a: &ComplexMatrix) -> Result<C64> {
    match LuFactorization::new(a) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::SingularMatrix { .. }) => Ok(C64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}
