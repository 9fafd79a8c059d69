use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("modulus polynomial {0} is reducible")]
    ReducibleModulus(String),
    #[error("modulus degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("root of {poly} requires a field extension")]
    NeedsExtension { poly: String },
    #[error("constant polynomial has no roots")]
    ConstantPolynomial,
    #[error("polynomial degree {0} is not supported for root finding")]
    UnsupportedDegree(usize),
    #[error("operation requires a finite field")]
    InfiniteField,
    #[error("basis change is singular")]
    SingularChange,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("key {0} has no closed form")]
    UnsupportedKey(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
