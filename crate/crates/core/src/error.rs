use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors returned by the profiling structures and their helpers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("object id {id} outside [1, {m}]")]
    ObjectOutOfRange { id: u64, m: usize },

    #[error("rank {k} outside [1, {m}]")]
    RankOutOfRange { k: usize, m: usize },

    #[error("{path}, line {line}: {reason}", path = path.display())]
    MalformedLine {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
