use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed line in a corpus, stoplist, or config file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// Two documents in one corpus share an id.
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),

    /// Input violates a numeric or structural precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An algebraic guarantee failed internally; indicates a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// Comparison of reports produced under different settings.
    #[error("config mismatch: {0}")]
    ConfigMismatch(String),

    /// Invalid pipeline configuration, whether from file or flags.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    /// An I/O failure on a specific file, named for the user's benefit.
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn file(path: impl AsRef<std::path::Path>, source: io::Error) -> Self {
        Error::File {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
