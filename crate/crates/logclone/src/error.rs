//! Crate-wide error type and exit-code mapping.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("corpus format error at line {line}: {msg}")]
    CorpusFormat { line: usize, msg: String },

    #[error("empty token bag")]
    EmptyBag,

    #[error("token bag below minimum size ({size} < {min})")]
    BagTooSmall { size: usize, min: usize },

    #[error("method {0} not found in corpus")]
    UnknownMethod(String),

    #[error("evidence clone has no logging statement")]
    NoLoggedClone,

    #[error("no logged clones to vote on")]
    EmptyVote,

    #[error("empty reference sequence")]
    EmptyReference,

    #[error("empty candidate sequence")]
    EmptyCandidate,

    #[error("reference has {len} tokens, need at least {n}")]
    ReferenceTooShort { len: usize, n: usize },

    #[error("train fraction must be in (0, 1), got {0}")]
    BadFraction(f64),

    #[error("split produced an empty {0} side")]
    EmptySplitSide(&'static str),

    #[error("empty test set")]
    EmptyTestSet,

    #[error("corpus contains no methods")]
    EmptyCorpus,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("train/test leak: {0} is present in the clone index")]
    SplitLeak(String),
}

impl Error {
    /// Process exit code for the CLI: 1 usage, 2 corpus, 3 evaluation impossible.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParam(_) => 1,
            Error::Io { .. } | Error::CorpusFormat { .. } | Error::EmptyCorpus => 2,
            Error::BadFraction(_)
            | Error::EmptySplitSide(_)
            | Error::EmptyTestSet
            | Error::SplitLeak(_) => 3,
            _ => 1,
        }
    }
}
