use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u128),
    #[error("modulus {0} does not fit in 64 bits")]
    ModulusTooLarge(u128),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero is not invertible")]
    NotInvertible,
    #[error("index {0} is not invertible in the coefficient field")]
    IndexNotInvertible(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn bad_input(msg: impl Into<String>) -> Self {
        Error::BadInput(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
