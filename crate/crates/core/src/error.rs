use thiserror::Error;

/// Errors raised while building problems, transforms or solver inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: bit strings need at least one bit")]
    InvalidDimension(usize),
    #[error("invalid parameter {name}={value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: i64,
        reason: String,
    },
    #[error("length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operation sequence violates the job multiset: {0}")]
    MultisetViolation(String),
    #[error("permutation table has {found} entries, objective needs {expected}")]
    PermutationSize { expected: usize, found: usize },
    #[error("not a permutation of 0..={0}")]
    NotAPermutation(u64),
    #[error("digest collision between objective values {0} and {1}")]
    DigestCollision(u64, u64),
    #[error("transform does not apply: {0}")]
    Transform(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: impl TryInto<i64>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            value: value.try_into().unwrap_or(i64::MAX),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
