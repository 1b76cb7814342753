//! The JSON report envelope every command emits on standard output. Reports
//! are schema-stable (see schema/report.schema.json) and deterministic for
//! fixed inputs, seed and tolerances.

use serde::Serialize;
use serde_json::Value;

use roundness::Tolerances;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct AnalysisReport {
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: Value,
    pub tolerances: Tolerances,
    pub results: Value,
}

impl AnalysisReport {
    pub fn new(command: &'static str, inputs: Value, tol: &Tolerances, results: Value) -> Self {
        AnalysisReport {
            command,
            version: VERSION,
            inputs,
            tolerances: *tol,
            results,
        }
    }

    pub fn render(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("reports serialize infallibly");
        text.push('\n');
        text
    }
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub command: &'static str,
    pub version: &'static str,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    /// "input" for exit code 2, "numeric" for exit code 3.
    pub kind: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<roundness::metric::MetricViolation>>,
}

impl ErrorReport {
    pub fn render(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("reports serialize infallibly");
        text.push('\n');
        text
    }
}
