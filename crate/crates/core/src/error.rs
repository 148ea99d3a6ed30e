//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures surfaced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the documented evaluation window.
    #[error("argument out of range: {0}")]
    Range(String),
    /// A growing solution would overflow the floating-point exponent range.
    #[error("overflow risk: {0}")]
    Overflow(String),
    /// Square-root arguments or other domain conditions were violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// A geometric configuration degenerates (e.g. coincident points).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// An adaptive procedure exhausted its budget before meeting its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// A mode sum or frequency integral did not reach the requested tolerance.
    #[error("truncation not converged: {0}")]
    Truncation(String),
    /// Invalid run configuration.
    #[error("config error: {0}")]
    Config(String),
    /// Filesystem failure, with the offending path.
    #[error("i/o error at {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
