use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Variants are coarse on purpose: the
/// CLI maps each one to a single exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or truncated input file, bad magic, shape mismatch on disk.
    #[error("format error: {0}")]
    Format(String),

    /// Caller violated an operation precondition (length mismatch, manifest
    /// mismatch, non-square input, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input is well-formed but statistically degenerate, e.g. zero variance.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A required record, subject or condition is missing or duplicated.
    #[error("incomplete data: {0}")]
    Completeness(String),

    /// Fewer valid voxels than requested.
    #[error("capacity error: requested {requested} voxels but only {available} valid voxels are available")]
    Capacity { requested: usize, available: usize },

    /// Study/selection parameters that cannot be satisfied.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A join produced too few rows for a statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Prefix the message with extra context, keeping the variant.
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Format(m) => Error::Format(format!("{ctx}: {m}")),
            Error::Contract(m) => Error::Contract(format!("{ctx}: {m}")),
            Error::Degenerate(m) => Error::Degenerate(format!("{ctx}: {m}")),
            Error::Completeness(m) => Error::Completeness(format!("{ctx}: {m}")),
            Error::Configuration(m) => Error::Configuration(format!("{ctx}: {m}")),
            Error::InsufficientData(m) => Error::InsufficientData(format!("{ctx}: {m}")),
            other => other,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(format!("json: {e}"))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(format!("csv: {e}"))
    }
}
