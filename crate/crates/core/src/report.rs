//! Measure results, tagged with what was measured and how.

use std::fmt;

use crate::exponent::Exponent;
use crate::measures::IidParams;

/// Which quantity a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureId {
    /// The pairwise power-difference family.
    Gp,
    /// Squared sine of the angle to the reference direction (or between two
    /// vectors).
    Angle,
    /// Cosine similarity.
    Cosine,
    /// The two-parameter pairwise family without scale normalization.
    Iid,
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureId::Gp => "g_p",
            MeasureId::Angle => "angle",
            MeasureId::Cosine => "cosine",
            MeasureId::Iid => "iid",
        })
    }
}

/// Which evaluation route produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// O(n^2) double sum over all pairs, in canonical ascending order.
    NaivePairwise,
    /// O(n log n) rank-weighted form after sorting.
    Sorted,
    /// Closed form in the first two power sums.
    Moments,
    /// Shares of entries classified as zero.
    ZeroCount,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::NaivePairwise => "naive_pairwise",
            Algorithm::Sorted => "sorted",
            Algorithm::Moments => "moments",
            Algorithm::ZeroCount => "zero_count",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureParams {
    Exponent(Exponent),
    Iid(IidParams),
}

/// A computed value plus enough metadata to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub value: f64,
    pub measure: MeasureId,
    pub params: Option<MeasureParams>,
    pub n: usize,
    pub algorithm: Algorithm,
}

/// Rounding slack absorbed at the unit-interval boundaries.
const BOUNDARY_SLACK: f64 = 1e-12;

impl MeasureReport {
    /// Wraps a raw value, absorbing boundary rounding noise: values within
    /// `1e-12` below zero or above one snap to the boundary. Anything further
    /// out is left alone so bugs stay visible.
    pub(crate) fn new(
        value: f64,
        measure: MeasureId,
        params: Option<MeasureParams>,
        n: usize,
        algorithm: Algorithm,
    ) -> Self {
        debug_assert!(
            (-BOUNDARY_SLACK..=1.0 + BOUNDARY_SLACK).contains(&value),
            "{measure} value {value} escapes [0, 1]"
        );
        let value = if (-BOUNDARY_SLACK..0.0).contains(&value) {
            0.0
        } else if value > 1.0 && value <= 1.0 + BOUNDARY_SLACK {
            1.0
        } else {
            value
        };
        Self { value, measure, params, n, algorithm }
    }
}
