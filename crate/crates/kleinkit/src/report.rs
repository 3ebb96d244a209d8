use std::fmt;

use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericResult {
    pub theta: f64,
    /// Largest interior residual over the assertion's residual expressions.
    pub interior_residual: f64,
    pub full_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssertionReport {
    pub line: usize,
    pub kind: String,
    pub symbolic_pass: bool,
    pub numeric: Vec<NumericResult>,
    pub pass: bool,
    /// Normal form of the residual, or an error message, when not passing.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub script: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub assertions: Vec<AssertionReport>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl RunReport {
    pub fn from_assertions(script: &str, assertions: Vec<AssertionReport>) -> Self {
        let passed = assertions.iter().filter(|a| a.pass).count();
        let failed = assertions.len() - passed;
        RunReport {
            script: script.to_string(),
            error: None,
            assertions,
            summary: Summary { passed, failed },
            exit_code: if failed == 0 { EXIT_PASS } else { EXIT_FAIL },
        }
    }

    pub fn from_error(script: &str, error: ErrorInfo) -> Self {
        RunReport {
            script: script.to_string(),
            error: Some(error),
            assertions: Vec::new(),
            summary: Summary { passed: 0, failed: 0 },
            exit_code: EXIT_ERROR,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = &self.error {
            write!(f, "{}:{}:{}: {}", self.script, e.line, e.column, e.message)?;
            if !e.expected.is_empty() {
                write!(f, " (expected {})", e.expected.join(", "))?;
            }
            return writeln!(f);
        }
        for a in &self.assertions {
            let verdict = if a.pass { "ok  " } else { "FAIL" };
            writeln!(f, "{verdict} {}:{} {}", self.script, a.line, a.kind)?;
            for n in &a.numeric {
                writeln!(f, "       theta {:.6}: interior {:.3e}, full {:.3e}", n.theta, n.interior_residual, n.full_residual)?;
            }
            if let Some(w) = &a.witness {
                writeln!(f, "       witness: {w}")?;
            }
        }
        writeln!(f, "{} passed, {} failed", self.summary.passed, self.summary.failed)
    }
}
