//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong constructing weights, aggregating evidence,
/// or running the simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need at least 2 parts, got {0}")]
    TooFewParts(usize),

    #[error("part {index} is negative ({value})")]
    NegativePart { index: usize, value: f64 },

    #[error("parts sum to {sum}, more than {tolerance} away from 1")]
    SumOutOfTolerance { sum: f64, tolerance: f64 },

    #[error("total {0} is too close to zero to normalize")]
    ZeroTotal(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("weight vectors have disjoint support, joint weights are undefined")]
    DegeneratePerturbation,

    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(f64),

    #[error("value at index {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },

    #[error("covariance matrix is not positive definite")]
    NotPositiveSemiDefinite,

    #[error("no built-in validity set with id {0}")]
    UnknownValiditySet(u32),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("input must contain at least one element")]
    EmptyInput,
}
