#![allow(dead_code)]

use abel_core::abel::AbelParameter;
use abel_core::certify::generate::{rng_from_seed, JordanBlock};
use abel_core::linalg::operator_norm;
use abel_core::{ComplexMatrix, C64};
use rand::Rng;

pub fn alpha(a: f64) -> AbelParameter {
    AbelParameter::new(a).unwrap()
}

pub fn alphas() -> Vec<AbelParameter> {
    [0.1, 0.5, 0.9].into_iter().map(alpha).collect()
}

pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    operator_norm(&(a - b))
}

/// `count` simple eigenvalues drawn from the annulus `r_min ≤ |ζ| ≤ r_max`.
pub fn simple_blocks(seed: u64, count: usize, r_min: f64, r_max: f64) -> Vec<JordanBlock> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let r = rng.random_range(r_min..=r_max);
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            JordanBlock { eigenvalue: C64::from_polar(r, phi), size: 1 }
        })
        .collect()
}

/// Fixed-seed configuration so every run explores the same cases.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x00ab_e1c0),
        failure_persistence: None,
        ..Default::default()
    }
}
