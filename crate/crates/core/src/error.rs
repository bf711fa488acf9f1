use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by ingestion, analysis, generation and the statistics routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unusable corpus: no tokens left after tokenization")]
    EmptyCorpus,

    #[error("too few segments to estimate variance: {n_tokens} tokens at dt={dt} give {segments} segment(s), need at least 2")]
    TooFewSegments {
        n_tokens: usize,
        dt: usize,
        segments: usize,
    },

    #[error("fewer than 2 usable points for the fit ({usable} word(s) with sigma > 0)")]
    TooFewPoints { usable: usize },

    #[error("degenerate regression: every usable point has the same mean")]
    DegenerateRegression,

    #[error("sample too small for the t approximation (n_a={n_a}, n_b={n_b}, need >= {min}); use an exact permutation method instead")]
    SampleTooSmall { n_a: usize, n_b: usize, min: usize },

    #[error("test undefined: midrank variance is zero in both samples")]
    DegenerateTest,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no Project Gutenberg start/end marker lines found")]
    NoGutenbergMarkers,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Io,
    Precondition,
    Degenerate,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. } | Error::Parse { .. } => ErrorKind::Io,
            Error::InvalidArgument(_) => ErrorKind::Usage,
            Error::DegenerateRegression | Error::DegenerateTest => ErrorKind::Degenerate,
            Error::EmptyCorpus
            | Error::TooFewSegments { .. }
            | Error::TooFewPoints { .. }
            | Error::SampleTooSmall { .. }
            | Error::EmptyInput(_)
            | Error::NoGutenbergMarkers => ErrorKind::Precondition,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
