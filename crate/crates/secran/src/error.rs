//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be positive definite is not (or is singular
    /// relative to the eigenvalue floor).
    #[error("matrix not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A fronthaul constraint or block selection was asked for an empty
    /// set of radio units.
    #[error("empty RU subset")]
    EmptySubset,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Configuration field failed validation.
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    /// No feasible starting point exists for the given capacities/powers.
    #[error("infeasible configuration: {0}")]
    InfeasibleConfig(String),

    /// Plot emission was asked to render zero rows.
    #[error("no data rows to plot")]
    EmptyData,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
