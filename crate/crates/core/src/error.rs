use thiserror::Error;

/// Errors produced by curve construction, alignment and distance computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("node counts differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("shift {shift} out of range for {n} nodes")]
    ShiftOutOfRange { shift: usize, n: usize },

    #[error("invalid reparameterization: {0}")]
    InvalidWarp(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{n} nodes exceeds the approach 1 limit of {max}; use approach 2 for large curves")]
    TooManyNodes { n: usize, max: usize },

    #[error("spline fit failed: {0}")]
    SplineFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed curve file: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
