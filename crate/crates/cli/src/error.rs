use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Compute(#[from] abel_core::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 3 when the numbers themselves fail.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}
