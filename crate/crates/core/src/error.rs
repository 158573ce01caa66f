use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: {message}")]
    Load { line: usize, message: String },

    #[error("sentence {seq}: {message}")]
    Structure { seq: usize, message: String },

    #[error("lexicon: {0}")]
    Lexicon(String),

    #[error("empty document")]
    EmptyDocument,

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("schema: {0}")]
    Schema(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn load(line: usize, message: impl Into<String>) -> Self {
        Error::Load {
            line,
            message: message.into(),
        }
    }
}
