use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("unknown value `{value}` for feature `{feature}`")]
    UnknownValue { feature: String, value: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown argument id {0}")]
    UnknownArgument(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("brute-force cap exceeded: {size} arguments > {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
