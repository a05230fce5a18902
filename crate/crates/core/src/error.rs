use thiserror::Error;

/// Errors produced by the generator and its harnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("inconsistent bit layout: {0}")]
    InconsistentLayout(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient {value} at index {index} is not below the modulus {modulus}")]
    CoefficientOutOfRange { index: usize, value: u32, modulus: u32 },
    #[error("degenerate LFSR state: master register is all-zero")]
    DegenerateState,
    #[error("insufficient trials: need at least {required}, got {got}")]
    InsufficientTrials { required: usize, got: usize },
    #[error("insufficient bits: need at least {required}, got {got}")]
    InsufficientBits { required: usize, got: usize },
    #[error("sender and receiver were given identical entropy inputs")]
    IdenticalSeeds,
    #[error("invalid entropy input: {0}")]
    InvalidEntropy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
