use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid genome: {0}")]
    InvalidGenome(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("adding edge {from} -> {to} would create a cycle")]
    CycleViolation { from: usize, to: usize },

    #[error("edge {from} -> {to} already present")]
    DuplicateEdge { from: usize, to: usize },

    #[error("edge {from} -> {to} not present")]
    MissingEdge { from: usize, to: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("regression of node {node} on {parents} parents is underdetermined with {n_obs} observations")]
    Underdetermined {
        node: usize,
        parents: usize,
        n_obs: usize,
    },

    #[error("exhaustive search supports at most {max} nodes, got {n}")]
    TooManyNodes { n: usize, max: usize },

    #[error("network ensemble is empty")]
    EmptyEnsemble,

    #[error("gold standard needs at least one positive and one negative label")]
    DegenerateGold,

    #[error("missing result for method `{method}` in context `{context}`")]
    MissingCell { context: String, method: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("column `{0}` has zero variance")]
    ZeroVariance(String),

    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: usize },

    #[error("malformed file {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the input data or input files rather than
    /// by arguments or by a broken internal invariant.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidDataset(_)
                | Error::Parse { .. }
                | Error::Shape(_)
                | Error::ZeroVariance(_)
                | Error::MissingValue { .. }
                | Error::Format { .. }
                | Error::Io { .. }
                | Error::UnknownLabel(_)
                | Error::DegenerateGold
                | Error::MissingCell { .. }
                | Error::Underdetermined { .. }
                | Error::InvalidGenome(_)
                | Error::CycleViolation { .. }
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InternalInvariant(_))
    }
}
