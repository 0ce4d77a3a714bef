use std::io;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("incomplete log: {0}")]
    IncompleteLog(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("window error: {0}")]
    Window(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("metadata error: {0}")]
    Metadata(String),

    #[error("assumption violated: {0}")]
    Assumption(String),
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        if err.is_io_error() {
            match err.into_kind() {
                csv::ErrorKind::Io(e) => Error::Io(e),
                _ => unreachable!(),
            }
        } else {
            Error::Format(err.to_string())
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        match err.classify() {
            serde_json::error::Category::Io => Error::Io(err.into()),
            _ => Error::Format(err.to_string()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
