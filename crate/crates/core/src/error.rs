use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires field coefficients, got integers")]
    NotAField,

    #[error("operation requires integer coefficients")]
    NotIntegers,

    #[error("malformed complex: {0}")]
    MalformedComplex(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grading error: {0}")]
    Grading(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}
