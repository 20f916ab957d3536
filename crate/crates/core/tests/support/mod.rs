//! Shared helpers for the integration suites: an exact-rational oracle over
//! integer vectors, seeded input corpora, and pair constructors.

// Each test binary compiles this module separately and uses its own subset.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ineq::Distribution;

/// The family value on an integer vector at integer exponent, computed in
/// exact integer arithmetic: `sum |v_i - v_j|^p / (2 n sum v_i^p)`. Panics
/// on overflow, so a passing run certifies the rational value.
pub fn gp_rational(values: &[i64], p: u32) -> f64 {
    let mut num: i128 = 0;
    for j in 1..values.len() {
        for i in 0..j {
            num += ((values[j] - values[i]).abs() as i128).pow(p);
        }
    }
    num *= 2;
    let mut power_sum: i128 = 0;
    for &v in values {
        power_sum += (v as i128).pow(p);
    }
    let den = 2 * values.len() as i128 * power_sum;
    num as f64 / den as f64
}

fn moment_sums(values: &[i64]) -> (i128, i128) {
    let s: i128 = values.iter().map(|&v| v as i128).sum();
    let q: i128 = values.iter().map(|&v| (v as i128) * (v as i128)).sum();
    (s, q)
}

/// Exact equality of the `p = 2` member on two integer vectors:
/// `1 - S^2/(nQ)` matches iff `S_a^2 n_b Q_b = S_b^2 n_a Q_a`.
pub fn g2_rational_equal(a: &[i64], b: &[i64]) -> bool {
    let (sa, qa) = moment_sums(a);
    let (sb, qb) = moment_sums(b);
    sa * sa * (b.len() as i128) * qb == sb * sb * (a.len() as i128) * qa
}

/// Random vectors: `n` in 2..=64, entries uniform on `[0, 10)` with a 10%
/// chance of an exact zero.
pub fn random_corpus(seed: u64, count: usize) -> Vec<Distribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=64);
            let mut values: Vec<f64> = (0..n)
                .map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..10.0) })
                .collect();
            if values.iter().all(|&v| v == 0.0) {
                *values.last_mut().unwrap() = rng.gen_range(1.0..10.0);
            }
            Distribution::new(values).unwrap()
        })
        .collect()
}

/// Vectors over the grid `{0, 0.2, 0.4, 0.6, 0.8, 1.0}`.
pub fn grid_corpus(seed: u64, count: usize) -> Vec<Distribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=64);
            let mut values: Vec<f64> =
                (0..n).map(|_| rng.gen_range(0..=5) as f64 * 0.2).collect();
            if values.iter().all(|&v| v == 0.0) {
                *values.last_mut().unwrap() = 1.0;
            }
            Distribution::new(values).unwrap()
        })
        .collect()
}

/// Small-integer vectors, which are dense in ties.
pub fn tied_corpus(seed: u64, count: usize) -> Vec<Distribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=64);
            let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=3) as f64).collect();
            if values.iter().all(|&v| v == 0.0) {
                *values.last_mut().unwrap() = 1.0;
            }
            Distribution::new(values).unwrap()
        })
        .collect()
}

/// Integer vector pairs with equal sums and equal sums of squares but
/// different multisets, found by bucketing random draws on those two
/// moments.
pub fn equal_moment_pairs(seed: u64, count: usize) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buckets: HashMap<(usize, i128, i128), Vec<Vec<i64>>> = HashMap::new();
    let mut pairs = Vec::new();
    let mut attempts = 0u64;
    while pairs.len() < count && attempts < 2_000_000 {
        attempts += 1;
        let n = rng.gen_range(3..=5);
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let (s, q) = moment_sums(&v);
        let bucket = buckets.entry((n, s, q)).or_default();
        let mut sorted = v.clone();
        sorted.sort_unstable();
        let fresh = bucket.iter().all(|held| {
            let mut hs = held.clone();
            hs.sort_unstable();
            hs != sorted
        });
        if !fresh {
            continue;
        }
        if let Some(partner) = bucket.first().cloned() {
            pairs.push((partner, v.clone()));
        }
        bucket.push(v);
    }
    assert_eq!(pairs.len(), count, "moment-matched pair search exhausted its budget");
    pairs
}

pub fn to_distribution(values: &[i64]) -> Distribution {
    Distribution::new(values.iter().map(|&v| v as f64).collect::<Vec<_>>()).unwrap()
}
