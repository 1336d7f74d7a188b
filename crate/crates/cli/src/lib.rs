//! Library half of the `abel` command: matrix files, report serialization
//! and the subcommand implementations.

pub mod commands;
mod error;
pub mod json;
pub mod matrix_file;
pub mod report;

pub use error::CliError;
pub use json::Json;
pub use matrix_file::{parse_matrix, parse_matrix_str, serialize_matrix, MatrixFile};
pub use report::Report;

use std::path::Path;

/// Writes `(exponent, defect)` rows under the header `exponent,defect`.
pub fn write_history_csv(path: &Path, history: &[(u64, f64)]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io { path: path.to_owned(), source: e.into() };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["exponent", "defect"]).map_err(io)?;
    for &(exponent, defect) in history {
        w.write_record([exponent.to_string(), format!("{defect:.16e}")]).map_err(io)?;
    }
    w.flush().map_err(|source| CliError::Io { path: path.to_owned(), source })
}
