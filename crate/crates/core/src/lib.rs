//! Abel averages of discrete and continuous operator semigroups on finite
//! dimensional spaces, certificates for their power convergence, and a
//! truncated spectral model of the operator `d²/dt² + 2 - t²` on `L²(ℝ)`.

pub mod abel;
pub mod certify;
mod error;
pub mod linalg;
pub mod oscillator;
pub mod semigroup;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
