use thiserror::Error;

use crate::partitions::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("the empty partition has no diagonal")]
    EmptyPartition,

    #[error("{r} is not a descent of {shape}")]
    NotADescent { shape: Partition, r: usize },

    #[error("{0} is not self-conjugate")]
    NotSelfConjugate(Partition),

    #[error("{0} is a hook; a proper partition is required")]
    IsHook(Partition),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("denominator {denominator} is divisible by p = {p}; retry with a different prime")]
    PrimeCollision { p: u64, denominator: String },

    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),

    #[error("series with zero constant term is not invertible")]
    NonUnit,

    #[error("missing block for {0}")]
    MissingBlock(Partition),

    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
