use abel_core::ComplexMatrix;
use sha2::{Digest, Sha256};

use crate::json::Json;

/// A command's output: parameters, results and a digest of everything that
/// determined them.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub parameters: Json,
    pub results: Json,
    pub history_csv_path: Option<String>,
}

impl Report {
    pub fn new(command: &str, matrix: &ComplexMatrix, parameters: Json, results: Json) -> Self {
        let inputs = Json::object([
            ("command", Json::from(command)),
            ("matrix", Json::matrix(matrix)),
            ("parameters", parameters.clone()),
        ]);
        Self::build(command, &inputs, parameters, results)
    }

    pub fn without_matrix(command: &str, parameters: Json, results: Json) -> Self {
        let inputs = Json::object([("command", Json::from(command)), ("parameters", parameters.clone())]);
        Self::build(command, &inputs, parameters, results)
    }

    fn build(command: &str, inputs: &Json, parameters: Json, results: Json) -> Self {
        let digest = Sha256::digest(inputs.compact().as_bytes());
        Self {
            command: command.to_owned(),
            inputs_digest: format!("sha256:{digest:x}"),
            parameters,
            results,
            history_csv_path: None,
        }
    }

    pub fn to_json(&self) -> Json {
        Json::object([
            ("command", Json::from(self.command.as_str())),
            ("inputs_digest", Json::from(self.inputs_digest.as_str())),
            ("parameters", self.parameters.clone()),
            ("results", self.results.clone()),
            ("history_csv_path", Json::from(self.history_csv_path.clone())),
        ])
    }

    pub fn render(&self) -> String {
        self.to_json().pretty()
    }
}
