//! Shared error type for construction and operation failures.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two boundaries that must coincide do not (e.g. composing relations
    /// whose middle sets differ).
    #[error("{op}: boundary mismatch, {left} vs {right}")]
    BoundaryMismatch {
        op: &'static str,
        left: String,
        right: String,
    },

    /// A value violates a construction invariant.
    #[error("invalid {what}: {why}")]
    Invalid { what: String, why: String },

    /// An exponential operation was refused because the input exceeds the
    /// configured size guard.
    #[error("size guard exceeded in {op}: {what} has size {size}, guard is {guard}")]
    GuardExceeded {
        op: &'static str,
        what: String,
        size: usize,
        guard: usize,
    },

    /// A required table entry or named item is absent.
    #[error("missing {what}: {name}")]
    Missing { what: &'static str, name: String },
}

impl Error {
    pub fn invalid(what: impl Into<String>, why: impl Into<String>) -> Self {
        Error::Invalid {
            what: what.into(),
            why: why.into(),
        }
    }
}
