use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} out of range (2..=32)")]
    DegreeOutOfRange(u32),
    #[error("modulus {modulus:#x} does not have degree {expected}")]
    ModulusDegree { modulus: u64, expected: u32 },
    #[error("modulus {modulus:#x} is reducible (divisible by {factor:#x})")]
    ReducibleModulus { modulus: u64, factor: u64 },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("element {0} is not invertible")]
    NotInvertible(u64),
    #[error("the zero vector does not define a line")]
    ZeroLine,
    #[error("relation is not a scheme: {reason} (witness: {witness})")]
    NotAScheme { reason: String, witness: String },
    #[error("invalid fusion partition: {0}")]
    InvalidPartition(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn not_a_scheme(reason: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::NotAScheme { reason: reason.into(), witness: witness.into() }
    }
}
