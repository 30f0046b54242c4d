use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series not invertible")]
    SeriesNotInvertible,

    #[error("{what}: {requested} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        requested: String,
        cap: u64,
    },

    #[error("malformed permutation: {0}")]
    InvalidPermutation(String),

    #[error("composition sums to {actual}, expected {expected}")]
    CompositionSumMismatch { expected: u64, actual: u64 },

    #[error("polynomial has a negative coefficient at q^{0}")]
    NegativeCoefficient(usize),

    #[error("the zero polynomial is not a probability generating function")]
    ZeroPolynomial,

    #[error("distribution has zero variance")]
    DegenerateVariance,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expected an integer, got {0}")]
    NonIntegral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
