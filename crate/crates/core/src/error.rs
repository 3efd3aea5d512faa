use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the sampling and benchmark pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("empty result: {0}")]
    EmptyResult(String),

    /// The encoded matrix has no non-zero spectrum, so there is nothing to squeeze.
    #[error("no signal: {0}")]
    NoSignal(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("empty seed: {0}")]
    EmptySeed(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
