use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A checked 128-bit operation would have wrapped while processing `m`.
    #[error("arithmetic overflow while processing m = {m}")]
    Overflow { m: u128 },

    #[error("{0} is not a positive odd integer")]
    NotOdd(u128),

    #[error("coordinates {first} and {second} of the tuple are equal")]
    RepeatedCoordinate { first: usize, second: usize },

    #[error("invalid permutation pattern: {0}")]
    InvalidPattern(String),

    #[error("pattern has length {found}, census has length {expected}")]
    PatternLengthMismatch { expected: usize, found: usize },

    /// No classification rule fired. This is a bug, never an expected state.
    #[error("no classification rule fired for m = {m}")]
    InternalPartitionViolation { m: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
