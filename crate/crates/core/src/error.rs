use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent with another field.
    #[error("invalid configuration: `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("initialization failed: {0}")]
    Init(String),

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{what} requires a non-empty input")]
    Empty { what: &'static str },

    #[error("sweep cell ({cell}): {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by bad input rather than the environment.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. } | Error::Init(_) | Error::Parse { .. } | Error::Empty { .. } => {
                true
            }
            Error::Cell { source, .. } => source.is_config(),
            Error::Io { .. } | Error::Csv(_) => false,
        }
    }
}
