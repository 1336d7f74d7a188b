//! Seeded random instances with controlled spectral and Jordan structure.
//!
//! Matrices are built as `S·J·S⁻¹` where `J` is block diagonal with Jordan
//! blocks and `S = U·Σ·W` has random unitary factors, so `S⁻¹ = W*·Σ⁻¹·U*`
//! is available without a solve.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_part_max_eig, ComplexMatrix, C64};
use crate::Result;

/// Escaping eigenvalues are kept this far from `1/α` for `α ∈ {0.1, 0.5, 0.9}`.
const POLE_CLEARANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Spectrum in `Re ζ ≤ 1`, eigenvalue 1 (if present) semisimple.
    Holds,
    /// A Jordan block of size 2 or 3 at eigenvalue 1.
    JordanAtOne,
    /// One eigenvalue with real part in `[1.05, 1.5]`.
    SpectrumEscapes,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 3] = [InstanceKind::Holds, InstanceKind::JordanAtOne, InstanceKind::SpectrumEscapes];

    pub fn tag(self) -> &'static str {
        match self {
            InstanceKind::Holds => "holds",
            InstanceKind::JordanAtOne => "jordan_at_one",
            InstanceKind::SpectrumEscapes => "spectrum_escapes",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// Whether condition (ii) of the equivalence is true by construction.
    pub fn expected_to_hold(self) -> bool {
        matches!(self, InstanceKind::Holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub min_dim: usize,
    pub max_dim: usize,
    /// Upper bound on the 2-norm condition number of the similarity `S`.
    pub max_condition: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { min_dim: 2, max_dim: 16, max_condition: 10.0 }
    }
}

/// A Jordan block `λ·I + N` of the given size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock {
    pub eigenvalue: C64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub seed: u64,
    pub kind: InstanceKind,
    pub blocks: Vec<JordanBlock>,
    pub condition: f64,
    pub matrix: ComplexMatrix,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Multiplicity of the semisimple eigenvalue 1 (zero for `JordanAtOne`).
    pub fn semisimple_ones(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.eigenvalue == C64::new(1.0, 0.0) && b.size == 1)
            .count()
    }

    /// True when the construction puts every eigenvalue in the closed unit
    /// disk with the unimodular ones semisimple.
    pub fn power_bounded_by_construction(&self) -> bool {
        self.blocks.iter().all(|b| {
            let r = b.eigenvalue.norm();
            r < 1.0 - 1e-12 || (r <= 1.0 + 1e-12 && b.size == 1)
        })
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("finite samples")
}

/// Haar-distributed unitary matrix (QR of a Gaussian matrix with the
/// phases of `R`'s diagonal divided out).
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_gaussian(rng, n, n);
    let qr = g.to_faer().qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let data: Vec<C64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| q[(i, j)]).collect();
    ComplexMatrix::from_row_major(n, n, data).expect("finite unitary")
}

/// Random similarity `S` and its exact-form inverse, with `cond₂(S)` drawn
/// log-uniformly from `[1, max_condition]`.
pub fn random_similarity(rng: &mut impl Rng, n: usize, max_condition: f64) -> (ComplexMatrix, ComplexMatrix, f64) {
    let u = random_unitary(rng, n);
    let w = random_unitary(rng, n);
    let cond = max_condition.max(1.0).powf(rng.random::<f64>());
    let mut sigma: Vec<f64> = (0..n).map(|_| cond.powf(rng.random::<f64>())).collect();
    if n >= 2 {
        sigma[0] = 1.0;
        sigma[n - 1] = cond;
    }
    let d = ComplexMatrix::from_real_diagonal(&sigma);
    let d_inv = ComplexMatrix::from_real_diagonal(&sigma.iter().map(|s| 1.0 / s).collect::<Vec<_>>());
    let s = u.matmul(&d).matmul(&w);
    let s_inv = w.adjoint().matmul(&d_inv).matmul(&u.adjoint());
    let realized = if n >= 2 { cond } else { 1.0 };
    (s, s_inv, realized)
}

pub fn jordan_matrix(blocks: &[JordanBlock]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.size).sum();
    let mut j = ComplexMatrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.size {
            j[(offset + i, offset + i)] = b.eigenvalue;
            if i + 1 < b.size {
                j[(offset + i, offset + i + 1)] = C64::new(1.0, 0.0);
            }
        }
        offset += b.size;
    }
    j
}

fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Eigenvalue strictly inside the half-plane, kept where every Abel average
/// with `α ∈ {0.1, 0.5, 0.9}` contracts it by at least a factor 0.95, and
/// outside the annulus `0.9 < |ζ| < 1.1` so that power-bounded instances
/// are not arbitrarily slow to average.
fn interior_eigenvalue(rng: &mut impl Rng, defective: bool) -> C64 {
    let hi = if defective { 0.0 } else { 0.5 };
    loop {
        let z = C64::new(uniform(rng, -1.5, hi), uniform(rng, -1.0, 1.0));
        if (z.norm() - 1.0).abs() >= 0.1 {
            return z;
        }
    }
}

/// Eigenvalue in the disk `|ζ| ≤ radius`.
fn disk_eigenvalue(rng: &mut impl Rng, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, uniform(rng, -std::f64::consts::PI, std::f64::consts::PI))
}

/// Eigenvalue on the boundary line `Re ζ = 1`, away from 1.
fn boundary_eigenvalue(rng: &mut impl Rng) -> C64 {
    let y = uniform(rng, 3.0, 4.0);
    C64::new(1.0, if rng.random::<bool>() { y } else { -y })
}

fn escaping_eigenvalue(rng: &mut impl Rng) -> C64 {
    loop {
        let x = uniform(rng, 0.05, 0.5);
        let y = uniform(rng, -0.5 * x, 0.5 * x);
        let z = C64::new(1.0 + x, y);
        if [10.0, 2.0, 1.0 / 0.9].iter().all(|&pole| (z - pole).norm() >= POLE_CLEARANCE) {
            return z;
        }
    }
}

/// Fills `remaining` dimensions with semisimple ones, interior blocks and
/// occasional boundary eigenvalues. In `disk` mode every eigenvalue other
/// than 1 lies well inside the unit disk, so the instance is power bounded.
fn fill_blocks(rng: &mut impl Rng, blocks: &mut Vec<JordanBlock>, mut remaining: usize, max_ones: usize, disk: bool) {
    let ones = rng.random_range(0..=max_ones.min(remaining).min(3));
    for _ in 0..ones {
        blocks.push(JordanBlock { eigenvalue: C64::new(1.0, 0.0), size: 1 });
    }
    remaining -= ones;
    while remaining > 0 {
        let roll: f64 = rng.random();
        if remaining >= 2 && roll < 0.25 {
            let size = if remaining >= 3 && rng.random::<f64>() < 0.3 { 3 } else { 2 };
            let eigenvalue = if disk { disk_eigenvalue(rng, 0.25) } else { interior_eigenvalue(rng, true) };
            blocks.push(JordanBlock { eigenvalue, size });
            remaining -= size;
        } else if roll < 0.35 && !disk {
            blocks.push(JordanBlock { eigenvalue: boundary_eigenvalue(rng), size: 1 });
            remaining -= 1;
        } else {
            let eigenvalue = if disk { disk_eigenvalue(rng, 0.5) } else { interior_eigenvalue(rng, false) };
            blocks.push(JordanBlock { eigenvalue, size: 1 });
            remaining -= 1;
        }
    }
}

/// Builds one instance of the requested kind and dimension (`dim ≥ 2`).
pub fn generate_instance(seed: u64, kind: InstanceKind, dim: usize, config: &GeneratorConfig) -> Instance {
    assert!(dim >= 2, "instances need dimension >= 2");
    let mut rng = rng_from_seed(seed);
    let mut blocks = Vec::new();
    let disk = rng.random::<f64>() < 0.5;
    match kind {
        InstanceKind::Holds => fill_blocks(&mut rng, &mut blocks, dim, dim, disk),
        InstanceKind::JordanAtOne => {
            let size = if dim >= 3 && rng.random::<f64>() < 0.3 { 3 } else { 2 };
            blocks.push(JordanBlock { eigenvalue: C64::new(1.0, 0.0), size });
            fill_blocks(&mut rng, &mut blocks, dim - size, 1, disk);
        }
        InstanceKind::SpectrumEscapes => {
            blocks.push(JordanBlock { eigenvalue: escaping_eigenvalue(&mut rng), size: 1 });
            fill_blocks(&mut rng, &mut blocks, dim - 1, dim - 1, disk);
        }
    }
    let (matrix, condition) = conjugate_blocks(seed, &blocks, config.max_condition);
    Instance { seed, kind, blocks, condition, matrix }
}

/// `S·J·S⁻¹` for the Jordan matrix of `blocks`, with `S` drawn from a stream
/// that depends only on `seed` and the dimension. Changing an eigenvalue
/// while keeping the seed therefore keeps the same eigenvectors.
pub fn conjugate_blocks(seed: u64, blocks: &[JordanBlock], max_condition: f64) -> (ComplexMatrix, f64) {
    let j = jordan_matrix(blocks);
    let mut rng = rng_from_seed(seed.rotate_left(17) ^ 0x5bd1_e995);
    let (s, s_inv, condition) = random_similarity(&mut rng, j.rows(), max_condition);
    (s.matmul(&j).matmul(&s_inv), condition)
}

/// `count` instances cycling through the three kinds, with dimensions drawn
/// from the configured range. Instance `i` uses seed `base_seed + i`.
pub fn generate_suite(base_seed: u64, count: usize, config: &GeneratorConfig) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
            let dim = rng.random_range(config.min_dim.max(2)..=config.max_dim.max(2));
            generate_instance(seed, InstanceKind::ALL[i % 3], dim, config)
        })
        .collect()
}

/// Random Gaussian matrix shifted so that `max Re W(T)` equals `target`.
pub fn numerical_range_instance(seed: u64, dim: usize, target: f64) -> Result<ComplexMatrix> {
    let mut rng = rng_from_seed(seed);
    let t = random_gaussian(&mut rng, dim, dim).scale_real(1.0 / (dim as f64).sqrt());
    let h = hermitian_part_max_eig(&t)?;
    Ok(t.shift(C64::new(target - h, 0.0)))
}

/// Generator `B = S·J·S⁻¹` with eigenvalues `μ` satisfying
/// `Re μ ∈ [−3, −0.1]` and `|Im μ| ≤ |Re μ|`, occasionally defective.
pub fn stable_generator(seed: u64, dim: usize, max_condition: f64) -> ComplexMatrix {
    let mut rng = rng_from_seed(seed);
    let mut blocks = Vec::new();
    let mut remaining = dim;
    while remaining > 0 {
        let re = -uniform(&mut rng, 0.1, 3.0);
        let im = uniform(&mut rng, re, -re);
        let size = if remaining >= 2 && rng.random::<f64>() < 0.2 { 2 } else { 1 };
        blocks.push(JordanBlock { eigenvalue: C64::new(re, im), size });
        remaining -= size;
    }
    let j = jordan_matrix(&blocks);
    let (s, s_inv, _) = random_similarity(&mut rng, dim, max_condition);
    s.matmul(&j).matmul(&s_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigendecompose, operator_norm, singular_values};

    #[test]
    fn same_seed_same_instance() {
        let cfg = GeneratorConfig::default();
        let a = generate_instance(7, InstanceKind::Holds, 9, &cfg);
        let b = generate_instance(7, InstanceKind::Holds, 9, &cfg);
        assert_eq!(a, b);
        assert_ne!(a.matrix, generate_instance(8, InstanceKind::Holds, 9, &cfg).matrix);
    }

    #[test]
    fn similarity_condition_is_controlled() {
        let mut rng = rng_from_seed(3);
        let (s, s_inv, cond) = random_similarity(&mut rng, 6, 100.0);
        let sv = singular_values(&s);
        assert!((sv[0] / sv[5] - cond).abs() < 1e-9 * cond);
        let id = s.matmul(&s_inv);
        assert!(operator_norm(&(&id - &ComplexMatrix::identity(6))) < 1e-12);
    }

    #[test]
    fn spectrum_matches_blocks() {
        let cfg = GeneratorConfig::default();
        for (seed, kind) in [(1, InstanceKind::Holds), (2, InstanceKind::SpectrumEscapes), (3, InstanceKind::JordanAtOne)] {
            let inst = generate_instance(seed, kind, 8, &cfg);
            assert_eq!(inst.blocks.iter().map(|b| b.size).sum::<usize>(), 8);
            let eig = eigendecompose(&inst.matrix).unwrap();
            let trace: C64 = inst.blocks.iter().map(|b| b.eigenvalue * b.size as f64).sum();
            let sum: C64 = eig.values.iter().sum();
            assert!((trace - sum).norm() < 1e-9);
            if kind == InstanceKind::SpectrumEscapes {
                assert!(eig.spectral_abscissa() >= 1.05 - 1e-8);
            } else {
                assert!(eig.spectral_abscissa() <= 1.0 + 1e-4);
            }
        }
    }

    #[test]
    fn numerical_range_target_is_met() {
        let t = numerical_range_instance(11, 7, 0.999).unwrap();
        assert!((hermitian_part_max_eig(&t).unwrap() - 0.999).abs() < 1e-12);
    }

    #[test]
    fn stable_generator_is_stable() {
        let b = stable_generator(5, 10, 10.0);
        assert!(eigendecompose(&b).unwrap().spectral_abscissa() <= -0.1 + 1e-8);
    }

    #[test]
    fn kinds_round_trip_through_tags() {
        for k in InstanceKind::ALL {
            assert_eq!(InstanceKind::from_tag(k.tag()), Some(k));
        }
        assert_eq!(InstanceKind::from_tag("nope"), None);
    }
}
