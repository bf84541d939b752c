use thiserror::Error;

/// Errors raised by cone constructions and checkers.
///
/// A checker that *runs* and finds a counterexample does not error; it
/// returns a failing verdict. Errors are reserved for violated
/// preconditions and unsupported inputs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("negative tolerance {0}")]
    NegativeTolerance(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no witness constructor for {0}")]
    NoWitnessConstructor(String),

    #[error("search space exceeded: {0}")]
    SearchSpaceExceeded(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("not symmetric positive definite: {0}")]
    NotSpd(String),
}

pub type Result<T> = std::result::Result<T, Error>;
