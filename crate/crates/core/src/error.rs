//! Errors raised when constructing domain values or evaluating measures.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The input vector has no entries.
    Empty,
    /// Every entry is zero; the measures divide by a mean or a norm.
    AllZero,
    /// An entry is negative.
    NegativeEntry { index: usize, value: f64 },
    /// An entry is NaN or infinite.
    NotFinite { index: usize, value: f64 },
    /// Two vectors that must share a length do not.
    DimensionMismatch { left: usize, right: usize },
    /// Exponent outside `[1, inf]`.
    InvalidExponent { p: f64 },
    /// Difference/mean powers outside `alpha > 0`, `0 <= beta <= 1`.
    InvalidParams { alpha: f64, beta: f64 },
    /// Zero-block length `k` outside `0 <= k < n`.
    InvalidK { k: usize, n: usize },
    /// Tolerances must be finite and positive.
    InvalidTolerance { value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::Empty => write!(f, "distribution must have at least one entry"),
            Error::AllZero => write!(f, "distribution must have at least one positive entry"),
            Error::NegativeEntry { index, value } => {
                write!(f, "entry {index} is negative ({value})")
            }
            Error::NotFinite { index, value } => {
                write!(f, "entry {index} is not finite ({value})")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "vectors must have equal length ({left} vs {right})")
            }
            Error::InvalidExponent { p } => {
                write!(f, "exponent must satisfy p >= 1 (got {p})")
            }
            Error::InvalidParams { alpha, beta } => {
                write!(f, "parameters must satisfy alpha > 0 and 0 <= beta <= 1 (got alpha={alpha}, beta={beta})")
            }
            Error::InvalidK { k, n } => {
                write!(f, "zero count k={k} must be less than the length n={n}")
            }
            Error::InvalidTolerance { value } => {
                write!(f, "tolerance must be finite and positive (got {value})")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
