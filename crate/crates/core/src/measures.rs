//! The measure family and its evaluation routes.
//!
//! The central object is the exponent-indexed family
//!
//! ```text
//! G_p(x) = sum_{i,j} |x_i - x_j|^p / (2 n^2 mean(x^p)),   p >= 1
//! ```
//!
//! which is the Gini coefficient at `p = 1`, the squared sine of the angle
//! between `x` and the all-ones direction at `p = 2`, and converges to the
//! share of zero entries as `p -> inf`. Each special exponent has a fast
//! evaluation route (sorting, moments, zero counting) alongside the O(n^2)
//! definitional route; tests hold the routes together.

use crate::distribution::{Distribution, Tolerance};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::report::{Algorithm, MeasureId, MeasureParams, MeasureReport};
use crate::sum::{kahan_dot, kahan_sum, KahanSum};

/// Largest `n` the O(n^2) pairwise routes accept in benchmarks and sanity
/// sweeps; above this the quadratic loop stops being a practical oracle.
pub const NAIVE_FEASIBLE_MAX: usize = 20_000;

/// Parameters of the two-parameter pairwise family: `alpha > 0` powers the
/// differences, `beta` in `[0, 1]` powers the mean in the denominator.
///
/// The family is scale-invariant only at `alpha = beta`; values are reported
/// for the input exactly as given, with no rescaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IidParams {
    alpha: f64,
    beta: f64,
}

impl IidParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let alpha_ok = alpha.is_finite() && alpha > 0.0;
        let beta_ok = (0.0..=1.0).contains(&beta);
        if !alpha_ok || !beta_ok {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }
}

/// `d^p` for `d >= 0`, with exact fast paths for the exponents that carry
/// the bit-identity guarantees between measure routes.
fn abs_power(d: f64, p: f64) -> f64 {
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        d.powf(p)
    }
}

/// Full double sum `sum_{i,j} |v_i - v_j|^p` over a slice in canonical
/// (ascending) order: twice the compensated sum over ordered pairs.
fn pairwise_abs_power_sum(sorted: &[f64], p: f64) -> f64 {
    let mut acc = KahanSum::new();
    for j in 1..sorted.len() {
        for i in 0..j {
            acc.add(abs_power(sorted[j] - sorted[i], p));
        }
    }
    2.0 * acc.value()
}

fn power_sum(values: &[f64], p: f64) -> f64 {
    kahan_sum(values.iter().map(|&v| abs_power(v, p)))
}

fn mean_power(mean: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        mean
    } else if beta == 0.0 {
        1.0
    } else {
        mean.powf(beta)
    }
}

/// Shared kernel for the Gini coefficient and the two-parameter family:
/// `sum_{i,j} |v_i - v_j|^alpha / (2 n^2 mean(v)^beta)`. Taking `alpha =
/// beta = 1` makes `iid_measure` and `gini_naive` bit-identical.
fn pairwise_over_mean(sorted: &[f64], alpha: f64, beta: f64) -> f64 {
    let n = sorted.len() as f64;
    let num = pairwise_abs_power_sum(sorted, alpha);
    let mean = kahan_sum(sorted.iter().copied()) / n;
    num / (2.0 * n * n * mean_power(mean, beta))
}

/// Gini coefficient by the definitional O(n^2) double sum.
pub fn gini_naive(d: &Distribution) -> MeasureReport {
    let value = pairwise_over_mean(&d.sorted_values(), 1.0, 1.0);
    MeasureReport::new(
        value,
        MeasureId::Gp,
        Some(MeasureParams::Exponent(Exponent::Finite(1.0))),
        d.n(),
        Algorithm::NaivePairwise,
    )
}

/// Gini coefficient in O(n log n) via the rank-weighted form
/// `sum_k (2k - n - 1) x_(k) / (n sum x)` over the ascending sort.
pub fn gini_sorted(d: &Distribution) -> MeasureReport {
    let xs = d.sorted_values();
    let n = xs.len();
    let mut acc = KahanSum::new();
    for (i, &v) in xs.iter().enumerate() {
        let w = (2 * (i + 1)) as isize - n as isize - 1;
        acc.add(w as f64 * v);
    }
    let value = acc.value() / (n as f64 * kahan_sum(xs.iter().copied()));
    MeasureReport::new(
        value,
        MeasureId::Gp,
        Some(MeasureParams::Exponent(Exponent::Finite(1.0))),
        n,
        Algorithm::Sorted,
    )
}

/// Family member at finite `p` by the definitional O(n^2) double sum.
///
/// Entries are rescaled by the maximum before powering; the measure is
/// scale-invariant, and working near `[0, 1]` keeps `d^p` away from
/// overflow for large `p`.
pub fn g_p_naive(d: &Distribution, p: f64) -> Result<MeasureReport> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidExponent { p });
    }
    let max = d.max_value();
    let mut xs: Vec<f64> = d.values().iter().map(|v| v / max).collect();
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    let num = pairwise_abs_power_sum(&xs, p);
    let value = num / (2.0 * n * power_sum(&xs, p));
    Ok(MeasureReport::new(
        value,
        MeasureId::Gp,
        Some(MeasureParams::Exponent(Exponent::Finite(p))),
        d.n(),
        Algorithm::NaivePairwise,
    ))
}

/// `1 - S^2 / (Q n)` over compensated power sums `S`, `Q`, shared by the
/// `p = 2` member and the angle measure so the two are bit-identical.
fn moments_complement(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let s = kahan_sum(values.iter().copied());
    let q = kahan_dot(values, values);
    1.0 - (s * s) / (q * n)
}

/// Family member at `p = 2` in closed form: `1 - (sum x)^2 / (n sum x^2)`.
pub fn g2_closed(d: &Distribution) -> MeasureReport {
    MeasureReport::new(
        moments_complement(d.values()),
        MeasureId::Gp,
        Some(MeasureParams::Exponent(Exponent::Finite(2.0))),
        d.n(),
        Algorithm::Moments,
    )
}

/// Limit member: the share of entries classified as zero.
pub fn g_infinity(d: &Distribution, tol: Tolerance) -> MeasureReport {
    let value = d.zero_count(tol) as f64 / d.n() as f64;
    MeasureReport::new(
        value,
        MeasureId::Gp,
        Some(MeasureParams::Exponent(Exponent::Infinity)),
        d.n(),
        Algorithm::ZeroCount,
    )
}

/// Family dispatch: sorted route at `p = 1`, moments at `p = 2`, zero
/// counting at `p = inf`, the pairwise sum elsewhere.
pub fn g_p(d: &Distribution, p: Exponent) -> Result<MeasureReport> {
    g_p_with_tolerance(d, p, Tolerance::default())
}

/// As [`g_p`], with an explicit classification tolerance for the `p = inf`
/// route.
pub fn g_p_with_tolerance(d: &Distribution, p: Exponent, tol: Tolerance) -> Result<MeasureReport> {
    match p {
        Exponent::Finite(1.0) => Ok(gini_sorted(d)),
        Exponent::Finite(2.0) => Ok(g2_closed(d)),
        Exponent::Finite(v) => g_p_naive(d, v),
        Exponent::Infinity => Ok(g_infinity(d, tol)),
    }
}

/// Squared sine of the angle between `x` and the all-ones direction;
/// coincides with the family member at `p = 2`.
pub fn angle_inequality(d: &Distribution) -> MeasureReport {
    MeasureReport::new(
        moments_complement(d.values()),
        MeasureId::Angle,
        Some(MeasureParams::Exponent(Exponent::Finite(2.0))),
        d.n(),
        Algorithm::Moments,
    )
}

/// Squared sine of the angle between two non-negative vectors:
/// `1 - <x,y>^2 / (<x,x> <y,y>)`. Zero exactly when `y` is proportional
/// to `x`.
pub fn angle_disproportionality(x: &Distribution, y: &Distribution) -> Result<MeasureReport> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { left: x.n(), right: y.n() });
    }
    let dxy = kahan_dot(x.values(), y.values());
    let dxx = kahan_dot(x.values(), x.values());
    let dyy = kahan_dot(y.values(), y.values());
    let value = 1.0 - (dxy * dxy) / (dxx * dyy);
    Ok(MeasureReport::new(value, MeasureId::Angle, None, x.n(), Algorithm::Moments))
}

/// Cosine similarity `<x,y> / (|x| |y|)`; the complement of its square is
/// the angle disproportionality.
pub fn salton_cosine(x: &Distribution, y: &Distribution) -> Result<MeasureReport> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { left: x.n(), right: y.n() });
    }
    let dxy = kahan_dot(x.values(), y.values());
    let dxx = kahan_dot(x.values(), x.values());
    let dyy = kahan_dot(y.values(), y.values());
    let value = dxy / (dxx.sqrt() * dyy.sqrt());
    Ok(MeasureReport::new(value, MeasureId::Cosine, None, x.n(), Algorithm::Moments))
}

/// The two-parameter family `sum_{i,j} |x_i - x_j|^alpha / (2 n^2
/// mean(x)^beta)`. At `alpha = beta = 1` this is exactly [`gini_naive`];
/// away from `alpha = beta` it is not scale-invariant, so no rescaling is
/// applied.
pub fn iid_measure(d: &Distribution, params: IidParams) -> MeasureReport {
    let raw = pairwise_over_mean(&d.sorted_values(), params.alpha, params.beta);
    // Only alpha = beta = 1 is confined to [0, 1]; report other parameter
    // points as computed.
    if params.alpha == 1.0 && params.beta == 1.0 {
        MeasureReport::new(
            raw,
            MeasureId::Iid,
            Some(MeasureParams::Iid(params)),
            d.n(),
            Algorithm::NaivePairwise,
        )
    } else {
        MeasureReport {
            value: raw,
            measure: MeasureId::Iid,
            params: Some(MeasureParams::Iid(params)),
            n: d.n(),
            algorithm: Algorithm::NaivePairwise,
        }
    }
}
