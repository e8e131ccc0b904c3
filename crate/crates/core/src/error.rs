use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps \
         (off-diagonal norm {off_norm:.3e}, target {target:.3e})"
    )]
    NotConverged {
        sweeps: usize,
        off_norm: f64,
        target: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weights must sum to 1 (sum is {sum})")]
    InvalidWeights { sum: f64 },

    #[error("requested {requested} components but numerical rank is {rank}")]
    RankExceeded { requested: usize, rank: usize },

    #[error("invalid distance matrix: {0}")]
    InvalidDistances(String),

    #[error("empty dataset")]
    Empty,

    #[error("{path}: file is empty")]
    EmptyFile { path: PathBuf },

    #[error("{path}: row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{path}: row {row}, column {col}: cannot parse {cell:?} as a number")]
    NonNumeric {
        path: PathBuf,
        row: usize,
        col: usize,
        cell: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
