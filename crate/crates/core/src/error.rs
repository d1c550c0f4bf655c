use thiserror::Error;

/// Errors produced anywhere in the estimation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("k = {k} is too large for a cloud of {available} candidate neighbors")]
    KTooLarge { k: usize, available: usize },

    #[error("degenerate neighborhood: {0}")]
    DegenerateNeighborhood(String),

    #[error("empty ball: no sample points within radius {0}")]
    EmptyBall(f64),

    #[error("rank deficient regression: {0}")]
    RankDeficient(String),

    #[error("estimation failed at every point ({failed} points)")]
    AllPointsFailed { failed: usize },

    #[error("zero variance: all points are identical")]
    ZeroVariance,

    #[error("invalid manifold spec: {0}")]
    Spec(String),

    #[error("missing entries: {0}")]
    MissingEntries(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
