//! Error types shared across the crate.

use crate::solver::RunTrace;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid method: {0}")]
    InvalidMethod(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// The iterate or objective became non-finite mid-run. Carries the rows
    /// recorded up to the last finite iterate so callers can persist them.
    #[error("divergence after {iterations} iterations ({grad_evals} gradient evaluations)")]
    Diverged {
        iterations: u64,
        grad_evals: u64,
        trace: Box<RunTrace>,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
