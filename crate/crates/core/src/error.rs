//! Error type shared by every layer of the engine.

use thiserror::Error;

use crate::quiverlab::ParseError;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or unsupported input.
    Input,
    /// A budget, stability or envelope refusal.
    Refusal,
    /// An internal consistency check fired.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: cannot choose {k}-dimensional subspaces of a {n}-dimensional space")]
    InvalidDimension { n: usize, k: usize },

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("{0} is not a usable prime modulus")]
    InvalidPrime(u64),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("path is not composable: {0}")]
    NonComposable(String),

    #[error("presentation has relations; this operation requires a hereditary presentation")]
    NotHereditary,

    #[error("representation is malformed: {0}")]
    MalformedRep(String),

    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u64, u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("catalog bound exceeded: {0}")]
    CatalogBoundExceeded(String),

    #[error("catalog incomplete: {0}")]
    CatalogIncomplete(String),

    #[error("fingerprint collision: {0}")]
    FingerprintCollision(String),

    #[error("prime F_{0} is not available in this catalog")]
    PrimeNotCatalogued(u64),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("not polynomial count: {0}")]
    NotPolynomialCount(String),

    #[error("unknown class label: {0}")]
    UnknownLabel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::BudgetExceeded(_)
            | Error::NotPolynomialCount(_)
            | Error::Refused(_)
            | Error::NotHereditary => ErrorKind::Refusal,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
