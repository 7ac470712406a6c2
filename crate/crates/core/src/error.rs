use thiserror::Error;

/// Errors raised by the library. Precondition failures carry the clause that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameter d = {0}: must be a positive squarefree integer")]
    InvalidField(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("all generators are zero")]
    ZeroIdeal,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ideals are not coprime: {0}")]
    NotCoprime(String),
    #[error("modulus is the unit ideal")]
    TrivialModulus,
    #[error("character is already modified")]
    AlreadyModified,
    #[error("no extension exists: f({unit}) = {value} is not 1")]
    NoExtension { unit: String, value: String },
    #[error("s = {0} lies outside the half-plane Re s > 1")]
    RegionError(String),
    #[error("precondition failed: {0}")]
    PreconditionError(String),
    #[error("{0} is not in the Folner window at level {1}")]
    NotFolnerElement(String, u32),
    #[error("hypothesis failed: {0} has no square root in the ring")]
    HypothesisFailed(String),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("Folner window at level {0} is empty")]
    EmptyFolner(u32),
    #[error("function {0} is not unimodular")]
    NotUnimodular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
