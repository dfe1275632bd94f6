use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input text (header, numeric token, JSON, CSV structure).
    #[error("{0}")]
    Parse(String),

    /// Well-formed input that violates a data invariant.
    #[error("{0}")]
    Invalid(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown attribute '{0}'")]
    UnknownAttribute(String),

    #[error("zero-variance attribute(s): {}", .0.join(", "))]
    ZeroVariance(Vec<String>),

    #[error("underdetermined: {needed} unknowns but only {available} points")]
    Underdetermined { needed: usize, available: usize },

    #[error("rank-deficient design matrix")]
    RankDeficient,

    #[error("singular system")]
    Singular,

    #[error("point ({x}, {y}) outside domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("unknown node id '{0}'")]
    UnknownNode(String),

    #[error("no route from '{from}' to '{to}'")]
    NoRoute { from: String, to: String },

    #[error("empty query")]
    EmptyQuery,

    #[error("geocode failure: no match for '{0}'")]
    GeocodeFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
