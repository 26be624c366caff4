//! Finite-model workbench for relational and Hilbert-space models of
//! complementarity: test spaces and testables, comprehension categories,
//! ray dictionaries, quantum probability measures, multitestables, and
//! instance-level verification of the star/mix-autonomous laws they carry.
//!
//! Everything here is desk-scale and exact: sets are finite and canonically
//! ordered, relations are bitset-backed, and every claimed law is checked on
//! bounded instances rather than assumed.

pub mod axioms;
pub mod bitset;
pub mod comprehension;
pub mod corpus;
pub mod error;
pub mod fhilb;
pub mod finrel;
pub mod multitest;
pub mod qprob;
pub mod report;
pub mod suite;
pub mod testspace;

pub use error::{Error, Result};
pub use report::{Failure, VerificationReport};

/// Default absolute tolerance for floating-point comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default size guard for exponential searches (universe elements).
pub const DEFAULT_GUARD: usize = 16;
