//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid function-class parameters: {0}")]
    InvalidClassParams(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("oracle failure at {point:?}: {reason}")]
    OracleFailure { point: Vec<f64>, reason: String },

    /// A bound or certificate was requested outside its case condition.
    #[error("case condition violated: {0}")]
    CaseMismatch(String),

    /// The theorem does not apply at these parameters at all.
    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid PEP specification: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
