use thiserror::Error;

/// Failure modes shared across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("logarithm needs a series with constant term 1")]
    LogConstantTerm,
    #[error("exponential needs a series with constant term 0")]
    ExpConstantTerm,
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("product of two expressions carrying logarithms is not representable")]
    LogProduct,
    #[error("expression carries a logarithm where none is allowed")]
    UnexpectedLog,
    #[error("expression is not divisible by T")]
    NotDivisibleByT,
    #[error("right-hand side is not in the image of the difference operator (k = {0})")]
    NotInImage(i64),
    #[error("pin inconsistent at n = {n}: expected {expected}, found {found}")]
    PinInconsistent { n: usize, expected: String, found: String },
    #[error("excess tags do not match: {0}")]
    ExcessMismatch(String),
    #[error("unknown closed form '{0}'")]
    UnknownName(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
