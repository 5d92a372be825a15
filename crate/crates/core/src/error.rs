use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot decode {path}: {message}")]
    Decode { path: PathBuf, message: String },
    #[error("cannot encode {path}: {message}")]
    Encode { path: PathBuf, message: String },
    #[error("invalid range: lo ({lo}) must be < hi ({hi})")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("no parseable images in {0}")]
    EmptyCorpus(PathBuf),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate path in manifest: {0}")]
    DuplicatePath(String),
    #[error("need {needed} identities, manifest has {available}")]
    InsufficientIdentities { needed: usize, available: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("degenerate batch: {0}")]
    DegenerateBatch(String),
    #[error("record {0} has no class probabilities")]
    MissingProbs(usize),
    #[error("record {index}: invalid probabilities ({message})")]
    InvalidProbs { index: usize, message: String },
    #[error("record {index}: label {label} outside [0, {classes})")]
    LabelOutOfRange {
        index: usize,
        label: i64,
        classes: usize,
    },
    #[error("no query has a valid positive in the gallery")]
    NoValidQueries,
    #[error("value {0} outside the domain {{-1, 0, 1}}")]
    Domain(i64),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vote value {0} is not -1 or +1")]
    BadVoteValue(i64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
