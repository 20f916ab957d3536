//! Validated input vectors: finite, non-negative, at least one positive entry.

use crate::error::{Error, Result};
use crate::sum::{kahan_sum, KahanSum};

/// Classification epsilons.
///
/// `rel_eps` scales with the largest entry and decides what counts as a zero
/// (and, symmetrically, what counts as equal to a target value); `cmp_eps` is
/// the absolute tolerance used when comparing measure values to each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel_eps: f64,
    pub cmp_eps: f64,
}

impl Tolerance {
    pub fn new(rel_eps: f64, cmp_eps: f64) -> Result<Self> {
        for value in [rel_eps, cmp_eps] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidTolerance { value });
            }
        }
        Ok(Self { rel_eps, cmp_eps })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel_eps: 1e-9, cmp_eps: 1e-12 }
    }
}

/// A non-negative vector with at least one positive entry, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
}

impl Distribution {
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let values = values.into();
        if values.is_empty() {
            return Err(Error::Empty);
        }
        let mut any_positive = false;
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NotFinite { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
            any_positive |= value > 0.0;
        }
        if !any_positive {
            return Err(Error::AllZero);
        }
        Ok(Self { values })
    }

    /// The unit-sum vector with `k` zeros followed by `n - k` copies of
    /// `1 / (n - k)`.
    pub fn standard(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if k >= n {
            return Err(Error::InvalidK { k, n });
        }
        let share = 1.0 / (n - k) as f64;
        let mut values = vec![0.0; n];
        for v in &mut values[k..] {
            *v = share;
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        kahan_sum(self.values.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.n() as f64
    }

    /// Entries within `rel_eps * max` of zero.
    pub fn zero_count(&self, tol: Tolerance) -> usize {
        let cutoff = tol.rel_eps * self.max_value();
        self.values.iter().filter(|&&v| v <= cutoff).count()
    }

    /// Entries within `rel_eps * max` of one.
    pub fn one_count(&self, tol: Tolerance) -> usize {
        let cutoff = tol.rel_eps * self.max_value();
        self.values.iter().filter(|&&v| (v - 1.0).abs() <= cutoff).count()
    }

    /// The vector extended by one entry `a >= 0`.
    pub fn append(&self, a: f64) -> Result<Self> {
        let mut values = self.values.clone();
        values.push(a);
        Self::new(values)
    }

    /// The concatenation `[self, tail]`.
    pub fn concat(&self, tail: &Distribution) -> Self {
        let mut values = self.values.clone();
        values.extend_from_slice(&tail.values);
        Self { values }
    }

    /// The vector scaled by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * lambda).collect::<Vec<_>>())
    }

    /// Ascending copy; the canonical order used by the pairwise algorithms.
    pub(crate) fn sorted_values(&self) -> Vec<f64> {
        let mut xs = self.values.clone();
        xs.sort_unstable_by(f64::total_cmp);
        xs
    }

    /// Cumulative share of the total held by the poorest fraction of entries.
    ///
    /// Returns `n + 1` points from `(0, 0)` to `(1, 1)`; the second
    /// coordinates are nondecreasing and the curve is convex, so it lies on
    /// or below the diagonal.
    pub fn lorenz_points(&self) -> Vec<(f64, f64)> {
        let xs = self.sorted_values();
        let n = xs.len() as f64;
        let mut cums = Vec::with_capacity(xs.len());
        let mut acc = KahanSum::new();
        for &v in &xs {
            acc.add(v);
            cums.push(acc.value());
        }
        let total = *cums.last().expect("distribution is non-empty");
        let mut points = Vec::with_capacity(xs.len() + 1);
        points.push((0.0, 0.0));
        for (i, cum) in cums.into_iter().enumerate() {
            points.push(((i + 1) as f64 / n, cum / total));
        }
        points
    }
}
