use thiserror::Error;

/// Errors raised by the algebra, enumeration and classification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A mathematical hypothesis of a construction does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: String,
        needed: String,
        limit: String,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
