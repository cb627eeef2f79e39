//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::linalg::ComplexMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("constellation has duplicate points {0} and {1}")]
    DuplicatePoint(usize, usize),

    #[error("constellation has zero average energy")]
    ZeroEnergy,

    #[error("constellation is empty")]
    EmptyConstellation,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid channel model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("optimizer did not converge after {iterations} iterations (best objective {objective})")]
    NoConvergence {
        iterations: usize,
        objective: f64,
        best: Box<ComplexMatrix>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
