use faer::Mat;

use super::{ComplexMatrix, C64};

/// Orthonormal basis of a subspace of `C^ambient`, stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub ambient: usize,
    pub vectors: ComplexMatrix,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    /// Largest deviation of `V*·V` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = &self.vectors.adjoint().matmul(&self.vectors) - &ComplexMatrix::identity(self.dim());
        g.max_abs()
    }
}

/// The conventional numerical-rank threshold `n·ε`, relative to `σ_max`.
pub fn default_rank_tol(n: usize) -> f64 {
    n.max(1) as f64 * f64::EPSILON
}

struct SortedSvd {
    values: Vec<f64>,
    /// Left singular vectors, ordered like `values`.
    u: Vec<Vec<C64>>,
    /// Right singular vectors, ordered like `values`.
    v: Vec<Vec<C64>>,
}

/// Rotates a vector so its largest entry (first one on ties) is real
/// and positive; makes basis output reproducible.
fn normalize_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mod {
            best = i;
            best_mod = m;
        }
    }
    if best_mod > 0.0 {
        let phase = v[best].conj() / best_mod;
        v.iter_mut().for_each(|z| *z *= phase);
    }
}

/// Thin SVD with singular triplets sorted by descending singular value.
fn sorted_svd(a: &Mat<C64>) -> SortedSvd {
    let (m, n) = (a.nrows(), a.ncols());
    let k = m.min(n);
    let svd = a.thin_svd().expect("SVD of a finite matrix converges");
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s[j].re.total_cmp(&s[i].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| s[i].re).collect();
    let u = order
        .iter()
        .map(|&c| {
            let mut col: Vec<C64> = (0..m).map(|i| u[(i, c)]).collect();
            normalize_phase(&mut col);
            col
        })
        .collect();
    let v = order
        .iter()
        .map(|&c| {
            let mut col: Vec<C64> = (0..n).map(|i| v[(i, c)]).collect();
            normalize_phase(&mut col);
            col
        })
        .collect();
    SortedSvd { values, u, v }
}

/// Appends zero rows so that `rows >= cols`; keeps `A*A` unchanged.
fn pad_rows(a: &ComplexMatrix) -> Mat<C64> {
    let rows = a.rows().max(a.cols());
    Mat::from_fn(rows, a.cols(), |i, j| if i < a.rows() { a[(i, j)] } else { C64::new(0.0, 0.0) })
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    if !a.is_finite() {
        return vec![f64::INFINITY];
    }
    // Singular values scale linearly, so normalize by the largest entry first;
    // the iteration can stall on entries near the overflow threshold.
    let scale = a.max_abs();
    if scale == 0.0 {
        return vec![0.0; a.rows().min(a.cols())];
    }
    let scaled = a.scale_real(1.0 / scale);
    let mut s = match scaled.to_faer().singular_values() {
        Ok(s) => s,
        Err(_) => return vec![f64::NAN; a.rows().min(a.cols())],
    };
    s.iter_mut().for_each(|x| *x *= scale);
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `rank_tol·σ_max`.
pub fn numerical_rank(a: &ComplexMatrix, rank_tol: f64) -> usize {
    numerical_rank_scaled(a, rank_tol, 0.0)
}

/// Number of singular values above `rank_tol·max(σ_max, reference)`.
///
/// `reference` is the magnitude of the data `a` was formed from. When `a`
/// is a difference such as `I − T` that cancels to rounding noise, its own
/// `σ_max` is noise too and a purely relative cutoff would call it full rank.
pub fn numerical_rank_scaled(a: &ComplexMatrix, rank_tol: f64, reference: f64) -> usize {
    let s = singular_values(a);
    let Some(&smax) = s.first() else { return 0 };
    let cutoff = rank_tol * smax.max(reference);
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular values are at most `rank_tol·σ_max`.
pub fn kernel_basis(a: &ComplexMatrix, rank_tol: f64) -> SubspaceBasis {
    kernel_basis_scaled(a, rank_tol, 0.0)
}

/// [`kernel_basis`] with the cutoff `rank_tol·max(σ_max, reference)`.
pub fn kernel_basis_scaled(a: &ComplexMatrix, rank_tol: f64, reference: f64) -> SubspaceBasis {
    let n = a.cols();
    if n == 0 {
        return SubspaceBasis { ambient: 0, vectors: ComplexMatrix::zeros(0, 0) };
    }
    let svd = sorted_svd(&pad_rows(a));
    let cutoff = rank_tol * svd.values[0].max(reference);
    let cols: Vec<Vec<C64>> = svd.values.iter().zip(svd.v).filter(|(&s, _)| s <= cutoff).map(|(_, v)| v).collect();
    SubspaceBasis { ambient: n, vectors: ComplexMatrix::from_columns(n, &cols) }
}

/// Orthonormal basis of the numerical column space: left singular vectors
/// whose singular values exceed `rank_tol·σ_max`.
pub fn image_basis(a: &ComplexMatrix, rank_tol: f64) -> SubspaceBasis {
    image_basis_scaled(a, rank_tol, 0.0)
}

/// [`image_basis`] with the cutoff `rank_tol·max(σ_max, reference)`.
pub fn image_basis_scaled(a: &ComplexMatrix, rank_tol: f64, reference: f64) -> SubspaceBasis {
    let m = a.rows();
    if m == 0 || a.cols() == 0 {
        return SubspaceBasis { ambient: m, vectors: ComplexMatrix::zeros(m, 0) };
    }
    let svd = sorted_svd(&a.to_faer());
    let smax = svd.values[0];
    let cutoff = rank_tol * smax.max(reference);
    let cols: Vec<Vec<C64>> = svd
        .values
        .iter()
        .zip(svd.u)
        .filter(|(&s, _)| smax > 0.0 && s > cutoff)
        .map(|(_, u)| u)
        .collect();
    SubspaceBasis { ambient: m, vectors: ComplexMatrix::from_columns(m, &cols) }
}

/// Largest principal angle between two subspaces, in radians. Subspaces of
/// different dimension are at angle π/2.
pub fn max_principal_angle(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    if a.dim() != b.dim() || a.ambient != b.ambient {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.dim() == 0 {
        return 0.0;
    }
    // sine of the largest angle = ‖(I − P_a)·B‖
    let proj = a.vectors.matmul(&a.vectors.adjoint().matmul(&b.vectors));
    let sine = operator_norm(&(&b.vectors - &proj));
    sine.min(1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[i] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn singular_values_near_overflow() {
        let big = ComplexMatrix::from_real_rows(&[&[1e300, 3e299], &[-2e299, 5e299]]);
        let s = singular_values(&big);
        let small = singular_values(&big.scale_real(1e-300));
        for (x, y) in s.iter().zip(&small) {
            assert!((x / 1e300 - y).abs() <= 1e-14 * y.max(1.0));
        }
        assert_eq!(singular_values(&ComplexMatrix::zeros(2, 3)), vec![0.0, 0.0]);
    }

    #[test]
    fn kernel_of_diagonal() {
        let k = kernel_basis(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0]), 1e-12);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vectors.column(0), e(2, 0));
        let im = image_basis(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0]), 1e-12);
        assert_eq!(im.dim(), 1);
        assert_eq!(im.vectors.column(0), e(2, 1));
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(kernel_basis(&z, 1e-12).dim(), 3);
        assert_eq!(image_basis(&z, 1e-12).dim(), 0);
    }

    #[test]
    fn nilpotent_kernel_and_image_coincide() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let k = kernel_basis(&a, 1e-12);
        let im = image_basis(&a, 1e-12);
        assert_eq!(k.vectors.column(0), e(2, 0));
        assert_eq!(im.vectors.column(0), e(2, 0));
        assert_eq!(max_principal_angle(&k, &im), 0.0);
    }

    #[test]
    fn rectangular_kernel() {
        // 1x3 row: kernel is 2-dimensional
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0, 0.0]]);
        let k = kernel_basis(&a, 1e-12);
        assert_eq!(k.dim(), 2);
        assert!(k.orthonormality_defect() < 1e-14);
        for j in 0..2 {
            assert!(a.matvec(&k.vectors.column(j))[0].norm() < 1e-14);
        }
        assert_eq!(image_basis(&a, 1e-12).dim(), 1);
    }

    #[test]
    fn norms() {
        assert!((operator_norm(&ComplexMatrix::identity(5)) - 1.0).abs() < 1e-15);
        let d = ComplexMatrix::from_diagonal(&[C64::new(3.0, 0.0), C64::new(0.0, -4.0)]);
        assert!((operator_norm(&d) - 4.0).abs() < 1e-14);
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((operator_norm(&n) - 2.0).abs() < 1e-14);
        assert_eq!(operator_norm(&ComplexMatrix::zeros(2, 2)), 0.0);
    }

    #[test]
    fn angle_between_distinct_lines() {
        let a = SubspaceBasis { ambient: 2, vectors: ComplexMatrix::from_columns(2, &[e(2, 0)]) };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = SubspaceBasis {
            ambient: 2,
            vectors: ComplexMatrix::from_columns(2, &[vec![C64::new(s, 0.0), C64::new(s, 0.0)]]),
        };
        assert!((max_principal_angle(&a, &b) - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }
}
