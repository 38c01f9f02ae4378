use thiserror::Error;

use crate::bn::{BnError, DatasetError};
use crate::ci::CiError;
use crate::graph::GraphError;
use crate::score::ScoreError;

/// Any failure surfaced by the library's top-level entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),
    #[error("{0} is score-based and has no oracle mode")]
    OracleUnsupported(&'static str),
    #[error("{0} needs a target variable")]
    MissingTarget(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Network(#[from] BnError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error(transparent)]
    Score(#[from] ScoreError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
