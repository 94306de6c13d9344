use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("mean undefined for alpha = {alpha} (requires alpha > 1)")]
    MeanUndefined { alpha: f64 },

    #[error("second moment undefined for alpha = {alpha} (requires alpha > 2)")]
    SecondMomentUndefined { alpha: f64 },

    #[error("unsupported uniformity m = {m}: {context}")]
    UnsupportedUniformity { m: usize, context: &'static str },

    #[error("invalid edge tuple: {0}")]
    InvalidTuple(String),

    #[error("naive enumeration of {candidates} candidates exceeds the guard of {limit}; use the skip sampler")]
    EnumerationGuard { candidates: u128, limit: u128 },

    #[error("brute-force loose 2-cycle count on {edges} edges exceeds the guard of {limit}")]
    BruteForceGuard { edges: usize, limit: usize },

    #[error("need >= 4 grid points for slope fitting, got {0}")]
    InsufficientGrid(usize),

    #[error("non-positive statistic {value} at n = {n}")]
    NonPositiveStatistic { n: u64, value: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for resource guards (as opposed to usage or input errors).
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::EnumerationGuard { .. } | Error::BruteForceGuard { .. })
    }
}
