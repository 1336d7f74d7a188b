//! The JSON matrix format `{"rows": r, "cols": c, "data": [[re, im], ...]}`.

use std::path::Path;

use abel_core::{ComplexMatrix, Error, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `[re, im]` pairs.
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), data: m.data().iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix, CliError> {
        let expected = self.rows.checked_mul(self.cols).ok_or_else(|| CliError::Input("rows·cols overflows".into()))?;
        if self.data.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: self.data.len() }.into());
        }
        let data = self.data.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        Ok(ComplexMatrix::from_row_major(self.rows, self.cols, data)?)
    }
}

/// Parses matrix JSON; `origin` names the source in diagnostics.
pub fn parse_matrix_str(text: &str, origin: &str) -> Result<ComplexMatrix, CliError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse { path: origin.to_owned(), message: e.to_string() })?;
    file.into_matrix()
}

pub fn parse_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_matrix_str(&text, &path.display().to_string())
}

/// Shortest round-trip decimal form of every entry.
pub fn serialize_matrix(m: &ComplexMatrix) -> String {
    let mut text = serde_json::to_string(&MatrixFile::from_matrix(m)).expect("finite matrices serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_and_jordan_examples() {
        let m = parse_matrix_str(r#"{"rows":1,"cols":1,"data":[[1,0]]}"#, "t").unwrap();
        assert_eq!(m, ComplexMatrix::identity(1));
        let j = parse_matrix_str(r#"{"rows":2,"cols":2,"data":[[1,0],[1,0],[0,0],[1,0]]}"#, "t").unwrap();
        assert_eq!(j, ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]));
    }

    #[test]
    fn length_mismatch() {
        let e = parse_matrix_str(r#"{"rows":2,"cols":2,"data":[[1,0],[1,0],[0,0]]}"#, "t").unwrap_err();
        assert!(matches!(e, CliError::Compute(Error::DimensionMismatch { expected: 4, actual: 3 })));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn strict_schema() {
        for bad in [
            r#"{"rows":1,"cols":1,"data":[[1,0]],"extra":1}"#,
            r#"{"rows":1,"cols":1,"data":[[1,0,0]]}"#,
            r#"{"rows":1,"cols":1,"data":[[NaN,0]]}"#,
            r#"{"rows":1,"data":[[1,0]]}"#,
        ] {
            let e = parse_matrix_str(bad, "t").unwrap_err();
            assert!(matches!(e, CliError::Parse { .. }), "{bad}");
        }
        let e = parse_matrix_str("{\n  \"rows\": 1,\n  \"colz\": 1\n}", "m.json").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn overflowing_literal_is_rejected() {
        assert!(parse_matrix_str(r#"{"rows":1,"cols":1,"data":[[1e400,0]]}"#, "t").is_err());
    }
}
