use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported ring d={0}; legal values are -163, -67, -43, -19, -11, -7, -3, -2, -1")]
    UnknownRing(i64),

    #[error("operands belong to different rings (d={0} and d={1})")]
    MixedRings(i64, i64),

    #[error("zero is not a valid argument here")]
    Zero,

    #[error("division by zero")]
    DivisionByZero,

    #[error("not divisible")]
    NotDivisible,

    #[error("{0} is not an integer prime")]
    NotPrime(String),

    #[error("{0} is not a prime of the ring")]
    NotRingPrime(String),

    #[error("xi(d) is undefined for d=-7: 2 splits there")]
    XiUndefined,

    #[error("norm {norm} exceeds the factoring ceiling {ceiling}; allow large norms explicitly to proceed")]
    NormTooLarge { norm: String, ceiling: String },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("checkpoint is corrupt: {0}")]
    CheckpointCorrupt(String),

    #[error("checkpoint version {found} is not supported (expected {expected})")]
    CheckpointVersion { found: u64, expected: u64 },

    #[error("checkpoint was written for a different configuration: {0}")]
    CheckpointMismatch(String),

    /// A hit failed re-verification or a factorization audit failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
