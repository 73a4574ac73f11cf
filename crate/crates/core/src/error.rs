use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input. `row` and `col` are 1-based; `col` is absent for
    /// row-level problems such as ragged rows.
    #[error("parse error at row {row}{}: {message}", col.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        row: usize,
        col: Option<usize>,
        message: String,
    },

    #[error("input contains no data")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource limit exceeded: {what} ({actual} > {limit})")]
    ResourceLimit {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("malformed structure: {0}")]
    Structure(String),

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("calibration drift: {0}")]
    Calibration(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
