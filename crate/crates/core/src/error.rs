use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is numerically singular (pivot {pivot} has magnitude {magnitude:e})")]
    SingularMatrix { pivot: usize, magnitude: f64 },
    #[error("eigenvalue iteration did not converge within its sweep budget")]
    NoConvergence,
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resolvent pole: {0}")]
    ResolventPole(String),
    #[error("pole of the spectral map at zeta = {re} + {im}i")]
    PoleHit { re: f64, im: f64 },
    #[error("kernel/image decomposition fails: {0}")]
    DecompositionFails(String),
    #[error("improper integral diverges: spectral abscissa {abscissa} is not below lambda = {lambda}")]
    IntegralDiverges { abscissa: f64, lambda: f64 },
    #[error("quadrature unstable: node doubling changed the result by {relative_defect:e} (relative)")]
    QuadratureUnstable { relative_defect: f64 },
    #[error("grid too coarse: residual {residual:e} exceeds {bound:e}")]
    GridTooCoarse { residual: f64, bound: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("vector is not in the complement of the fixed space: |alpha_0| = {component:e}")]
    NotInComplement { component: f64 },
}

impl Error {
    /// True for failures that stem from the numbers rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::NoConvergence
                | Error::Overflow(_)
                | Error::ResolventPole(_)
                | Error::PoleHit { .. }
                | Error::DecompositionFails(_)
                | Error::IntegralDiverges { .. }
                | Error::QuadratureUnstable { .. }
                | Error::GridTooCoarse { .. }
                | Error::NotInComplement { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
