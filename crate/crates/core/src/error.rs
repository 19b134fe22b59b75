use std::fmt;

use num_bigint::BigInt;

/// Errors raised by the construction and verification routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(BigInt),

    #[error("prime {0} is not supported: {1}")]
    UnsupportedPrime(BigInt, &'static str),

    #[error("the zero element has no multiplicative order")]
    ZeroElement,

    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    EpsilonOutOfRange(String),

    #[error("invalid rational {0:?}: expected num/den")]
    BadRational(String),

    #[error("exact search for N = {n} exceeds the configured bound {limit}")]
    BudgetExceeded { n: u64, limit: u64 },

    #[error("{what}: {needed} exceeds budget {budget}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("invariant violated at {stage}: {detail}")]
    InvariantViolation { stage: Stage, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed integer set: {0}")]
    MalformedSet(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where in the inductive process an invariant failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Initial,
    PairFill { h: u64 },
    Injection { h: u64 },
    /// A standalone operation outside of a build.
    Standalone,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Initial => write!(f, "initial state"),
            Stage::PairFill { h } => write!(f, "pair-fill step h={h}"),
            Stage::Injection { h } => write!(f, "injection step h={h}"),
            Stage::Standalone => write!(f, "standalone check"),
        }
    }
}

impl Error {
    pub(crate) fn violation(stage: Stage, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            stage,
            detail: detail.into(),
        }
    }
}
