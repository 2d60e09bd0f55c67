//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, extraction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian within tolerance (max |m - m^dag| entry = {0:.3e})")]
    NotHermitian(f64),

    #[error("unsupported dimension {0}: eigensolves handle 2x2 through 4x4 only")]
    UnsupportedDimension(usize),

    #[error("state is not normalized: |a0|^2 + |a1|^2 = {0}")]
    NotNormalized(f64),

    #[error("invalid superposition weights: {0}")]
    InvalidWeights(String),

    #[error("map is not trace-nonincreasing: min eigenvalue of (I - sum M^dag M) = {0:.3e}")]
    TraceIncreasing(f64),

    #[error("plane does not intersect the unit sphere: unit-normal offset {0}")]
    EmptyLocus(f64),

    #[error("plane normal vanishes")]
    ZeroNormal,

    #[error("channel cannot superpose |0> with |0>: |a21| = {0:.3e} is nonzero")]
    CannotSuperposeKnown(f64),

    #[error("lambda undefined: a23 = 0 degenerates the weight equation")]
    DegenerateLambda,

    #[error("no circle: coefficients (A, B, C) all vanish")]
    NoCircle,

    #[error("degenerate plane fit: points do not determine a unique plane")]
    DegenerateFit,

    #[error("state lies off the channel circle: residual {0:.3e}")]
    OffCircle(f64),

    #[error("phase fit failed for an on-circle state (internal invariant violation)")]
    PhaseFitFailed,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
