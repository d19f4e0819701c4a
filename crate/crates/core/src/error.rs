use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the tracing pipeline can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}: no records")]
    EmptyInput(String),

    #[error("{origin}:{line}: malformed record: {reason}")]
    MalformedRecord {
        origin: String,
        line: usize,
        reason: String,
    },

    #[error("{origin}:{line}: duplicate id `{id}`")]
    DuplicateId {
        origin: String,
        line: usize,
        id: String,
    },

    #[error("{origin}:{line}: malformed link: {reason}")]
    MalformedLink {
        origin: String,
        line: usize,
        reason: String,
    },

    #[error("corpus has no tokens after preprocessing")]
    EmptyCorpus,

    #[error("dimension mismatch: expected {expected}, found {found}{}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: Option<String>,
    },

    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no vector for {level} requirement `{id}`")]
    MissingVector { level: String, id: String },

    #[error("answer set is empty")]
    EmptyAnswerSet,

    #[error("answer set references unknown {level} id `{id}`")]
    UnknownId { level: String, id: String },

    #[error("term `{0}` is not in the vocabulary")]
    UnknownTerm(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Coarse failure class, used to pick the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Io,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 1,
            ErrorClass::Data => 2,
            ErrorClass::Io => 3,
        }
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } => ErrorClass::Io,
            Error::InvalidConfig(_) => ErrorClass::Usage,
            _ => ErrorClass::Data,
        }
    }
}
