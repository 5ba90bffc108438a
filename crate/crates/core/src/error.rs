use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("field would exceed the 62-bit cardinality guard")]
    FieldTooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("duplicate point at index {0}")]
    DuplicatePoint(usize),
    #[error("bad point at index {index}: {msg}")]
    BadPoint { index: usize, msg: String },
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("generator is not homogeneous")]
    NonHomogeneous,
    #[error("quotient not finite-dimensional below degree {0}")]
    StabilizationCap(u32),
    #[error("ideal is not monomial")]
    NonMonomialIdeal,
    #[error("degenerate flat: dependent rows")]
    DegenerateFlat,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
