use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-unit constant term: cannot invert a series whose constant term is {0}")]
    NonUnitConstant(String),

    /// Exact division left a remainder where the mathematics guarantees none.
    #[error("arithmetic integrity failure: {0}")]
    Integrity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "k = {k} exceeds the materialization cap {cap}; use the streaming verifier instead"
    )]
    CapExceeded { k: u32, cap: u32 },

    #[error("lcm(1, 3, ..., 2k-3) overflows 64 bits for k = {0}")]
    EllOverflow(u32),

    #[error("non-monomial intermediate parameter: {0}")]
    NonMonomial(String),

    #[error("certificate digest mismatch in {path}: stored {stored}, recomputed {computed}")]
    DigestMismatch {
        path: PathBuf,
        stored: String,
        computed: String,
    },

    #[error("malformed certificate {path}: {source}")]
    MalformedCertificate {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
