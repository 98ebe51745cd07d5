use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by fitting, neighbor search and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid K: {0} (must be at least 1)")]
    InvalidK(usize),

    #[error("insufficient points: requested {requested} neighbors from {available}")]
    InsufficientPoints { requested: usize, available: usize },

    #[error("invalid radius: {0}")]
    InvalidRadius(f64),

    #[error("degenerate neighborhood: no neighbor carries positive weight")]
    DegenerateNeighborhood,

    #[error("rank deficient normal matrix (effective rank {rank} of {size})")]
    RankDeficient { rank: usize, size: usize },

    #[error("constant term required in polynomial basis")]
    ConstantTermRequired,

    #[error("index {0} is not interior")]
    NotInterior(usize),

    #[error("duplicate abscissa at index {0}")]
    DuplicateAbscissa(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at point {0}")]
    NonFinite(usize),

    #[error("empty input")]
    Empty,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("query {index}: {source}")]
    Query {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    /// Strips any [`Error::Query`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Query { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
