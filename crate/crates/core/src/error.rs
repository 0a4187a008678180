use thiserror::Error;

/// Errors raised by parameter validation and parsing across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re}+{im}i is not inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("invalid arc: {0}")]
    InvalidArc(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("quadrature rule construction failed: {0}")]
    Rule(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
