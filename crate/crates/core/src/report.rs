//! Verification reports: a top-level verdict plus a sorted list of located
//! counterexamples. Failures are report content, not errors — operations
//! that *check* laws never abort on a law violation.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    /// Which law or clause failed, e.g. `"associativity"`.
    pub check: String,
    /// Where: a located path such as `["f", "g", "h", "phi,psi,chi"]`.
    pub at: Vec<String>,
    pub message: String,
}

impl Failure {
    pub fn new(check: impl Into<String>, at: Vec<String>, message: impl Into<String>) -> Self {
        Failure {
            check: check.into(),
            at,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub failures: Vec<Failure>,
    /// Free-form structured evidence: certificates, witnesses, tallies.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl VerificationReport {
    pub fn passing() -> Self {
        VerificationReport {
            pass: true,
            failures: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    pub fn from_failures(mut failures: Vec<Failure>) -> Self {
        failures.sort();
        failures.dedup();
        VerificationReport {
            pass: failures.is_empty(),
            failures,
            details: serde_json::Value::Null,
        }
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = details;
        self
    }

    pub fn push(&mut self, f: Failure) {
        self.pass = false;
        self.failures.push(f);
    }

    /// Canonicalize failure order after incremental pushes.
    pub fn finish(mut self) -> Self {
        self.failures.sort();
        self.failures.dedup();
        self.pass = self.failures.is_empty();
        self
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.pass &= other.pass;
        self.failures.extend(other.failures);
        self.failures.sort();
        self.failures.dedup();
    }
}
