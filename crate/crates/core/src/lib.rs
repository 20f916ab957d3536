//! Inequality measures built from pairwise power differences.
//!
//! One family underlies everything here: raise the absolute differences
//! `|x_i - x_j|` to an exponent `p >= 1`, sum over all pairs, and divide by
//! `2 n^2` times the mean of the `p`-th powers. At `p = 1` this is the Gini
//! coefficient; at `p = 2` it is the squared sine of the angle between the
//! vector and the all-ones line, which extends to a disproportionality
//! measure between two vectors; as `p` grows it converges to the share of
//! zero entries. The crate provides:
//!
//! - [`measures`]: every family member with both its definitional O(n^2)
//!   route and its fast route (sorting, moments, or zero counting), plus
//!   the angle and cosine comparisons and the unnormalized two-parameter
//!   variant.
//! - [`suite`]: mechanized checks of the properties that characterize the
//!   Gini member (scale invariance, symmetry, standardization, mixture
//!   linearity on comonotone pairs) and searches for the behaviors that
//!   separate the other members from it.
//! - [`analysis`]: exponent sweeps, an alternative pair-count denominator,
//!   and geometric convergence fits.

pub mod analysis;
pub mod distribution;
pub mod error;
pub mod exponent;
pub mod measures;
pub mod report;
pub mod suite;
pub mod sum;

pub use distribution::{Distribution, Tolerance};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use measures::{
    angle_disproportionality, angle_inequality, g2_closed, g_infinity, g_p, g_p_naive,
    g_p_with_tolerance, gini_naive, gini_sorted, iid_measure, salton_cosine, IidParams,
    NAIVE_FEASIBLE_MAX,
};
pub use report::{Algorithm, MeasureId, MeasureParams, MeasureReport};
