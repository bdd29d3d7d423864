use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time series is empty")]
    EmptySeries,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid word length {w} for series of length {n} (need 1 <= w <= n)")]
    InvalidWordLength { w: usize, n: usize },

    #[error("invalid segment size {0} (must be positive)")]
    InvalidSegmentSize(usize),

    #[error("invalid target length {n} for word of length {w} (need n >= w)")]
    InvalidLength { n: usize, w: usize },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("ISJ fixed-point iteration did not converge: {0}")]
    IsjConvergenceFailure(String),

    #[error("invalid bandwidth {0} (must be positive and finite)")]
    InvalidBandwidth(f64),

    #[error("invalid bin-width statistic {0} (must be positive and finite)")]
    InvalidStatistic(f64),

    #[error("invalid alphabet size {0} (must be in 2..=256)")]
    InvalidAlphabet(usize),

    #[error("degenerate density: {0}")]
    DegenerateDensity(String),

    #[error("word mismatch: {0}")]
    WordMismatch(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("too few non-zero paired differences ({0}, need at least 6)")]
    TooFewPairs(usize),

    #[error("unsupported model format version {found} (reader supports {supported})")]
    FormatVersionMismatch { found: u16, supported: u16 },

    #[error("corrupt model: {0}")]
    CorruptModel(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("file is empty: {0}")]
    EmptyFile(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
