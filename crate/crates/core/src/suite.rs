//! Mechanized property checks over the measure family: invariance axioms,
//! the identities that pin the special exponents together, and randomized
//! searches for behavior that separates family members.
//!
//! Checkers come in two flavors. Pass-style checks (`check_*`) succeed when
//! every evaluated case stays within tolerance and report violations as
//! witnesses. Search-style checks (`find_*`) succeed when they locate at
//! least one witness of the behavior they hunt for. Both are deterministic
//! in their seed.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{Distribution, Tolerance};
use crate::exponent::Exponent;
use crate::measures;

/// Absolute tolerance for permutation invariance. The pairwise and sorted
/// routes canonicalize order and reproduce bit-identical values; the moments
/// route re-accumulates, so a few ulps of slack remain.
pub const SYMMETRY_TOL: f64 = 1e-14;

/// Slack allowed past the `[0, (n-1)/n]` range bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// Relative mismatch allowed between the sums of a comonotone pair.
pub const PAIR_SUM_TOL: f64 = 1e-12;

/// A search hit must deviate by more than this to count as a witness;
/// anything smaller could be accumulation noise.
pub const WITNESS_MIN_DEVIATION: f64 = 1e-6;

const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum SuiteError {
    DimensionMismatch { left: usize, right: usize },
    InvalidMixWeight { beta: f64 },
    /// A check was handed inputs that do not satisfy its entry conditions.
    PreconditionViolated { detail: String },
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::DimensionMismatch { left, right } => {
                write!(f, "vectors must have equal length ({left} vs {right})")
            }
            SuiteError::InvalidMixWeight { beta } => {
                write!(f, "mix weight must lie in [0, 1] (got {beta})")
            }
            SuiteError::PreconditionViolated { detail } => {
                write!(f, "precondition violated: {detail}")
            }
        }
    }
}

impl std::error::Error for SuiteError {}

/// A convex combination weight in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixWeight(f64);

impl MixWeight {
    pub fn new(beta: f64) -> Result<Self, SuiteError> {
        if !beta.is_finite() || !(0.0..=1.0).contains(&beta) {
            return Err(SuiteError::InvalidMixWeight { beta });
        }
        Ok(Self(beta))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Two equal-length, equal-sum vectors ordered the same way: every pair of
/// coordinates rises or falls together.
#[derive(Debug, Clone, PartialEq)]
pub struct ComonotonePair {
    x: Distribution,
    z: Distribution,
}

impl ComonotonePair {
    pub fn new(x: Distribution, z: Distribution) -> Result<Self, SuiteError> {
        if !is_comonotone(&x, &z)? {
            return Err(SuiteError::PreconditionViolated {
                detail: "vectors are not comonotone".to_string(),
            });
        }
        let (sx, sz) = (x.total(), z.total());
        if (sx - sz).abs() > PAIR_SUM_TOL * sx.abs().max(1.0) {
            return Err(SuiteError::PreconditionViolated {
                detail: format!("sums differ: {sx} vs {sz}"),
            });
        }
        Ok(Self { x, z })
    }

    pub fn x(&self) -> &Distribution {
        &self.x
    }

    pub fn z(&self) -> &Distribution {
        &self.z
    }

    /// The coordinatewise convex combination `beta x + (1 - beta) z`.
    pub fn mix(&self, w: MixWeight) -> Distribution {
        let beta = w.get();
        let values: Vec<f64> = self
            .x
            .values()
            .iter()
            .zip(self.z.values())
            .map(|(&a, &b)| beta * a + (1.0 - beta) * b)
            .collect();
        Distribution::new(values).expect("convex mix of valid distributions is valid")
    }
}

/// True when no pair of coordinates moves in opposite directions:
/// `(x_i - x_j)(z_i - z_j) >= 0` for all `i, j`.
pub fn is_comonotone(x: &Distribution, z: &Distribution) -> Result<bool, SuiteError> {
    if x.n() != z.n() {
        return Err(SuiteError::DimensionMismatch { left: x.n(), right: z.n() });
    }
    let (xs, zs) = (x.values(), z.values());
    for j in 1..xs.len() {
        for i in 0..j {
            if (xs[i] - xs[j]) * (zs[i] - zs[j]) < 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Draws a random comonotone pair with matching sums: both vectors sorted
/// ascending, the second rescaled onto the first's total.
pub fn make_comonotone_pair(n: usize, seed: u64) -> ComonotonePair {
    assert!(n >= 2, "a comonotone pair needs at least two coordinates");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    comonotone_pair_from_rng(n, &mut rng)
}

fn comonotone_pair_from_rng(n: usize, rng: &mut ChaCha8Rng) -> ComonotonePair {
    loop {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let mut zs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        xs.sort_unstable_by(f64::total_cmp);
        zs.sort_unstable_by(f64::total_cmp);
        let (sx, sz) = (xs.iter().sum::<f64>(), zs.iter().sum::<f64>());
        if sx <= 0.0 || sz <= 0.0 {
            continue;
        }
        let factor = sx / sz;
        for v in &mut zs {
            *v *= factor;
        }
        let x = Distribution::new(xs).expect("sampled entries are non-negative");
        let z = Distribution::new(zs).expect("sampled entries are non-negative");
        match ComonotonePair::new(x, z) {
            Ok(pair) => return pair,
            Err(_) => continue,
        }
    }
}

/// A concrete input (or input tuple) on which a check deviated, with the
/// values observed. `deviation` is reproducible by re-evaluating the
/// measures on `distributions`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub distributions: Vec<Distribution>,
    pub parameter: Option<f64>,
    pub observed: Vec<f64>,
    pub deviation: f64,
}

/// Aggregate result of one check: worst deviation seen, number of cases
/// evaluated, and up to eight witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub deviation: f64,
    pub trials: u64,
    pub witnesses: Vec<Witness>,
}

impl CheckOutcome {
    /// Conjunction fold for pass-style checks: both must pass, deviations
    /// take the max, trials add, witnesses concatenate up to the cap.
    pub fn merge(mut self, other: CheckOutcome) -> CheckOutcome {
        self.passed &= other.passed;
        self.deviation = self.deviation.max(other.deviation);
        self.trials += other.trials;
        for w in other.witnesses {
            if self.witnesses.len() >= MAX_WITNESSES {
                break;
            }
            self.witnesses.push(w);
        }
        self
    }
}

/// Accumulator for pass-style checks.
struct Acc {
    passed: bool,
    deviation: f64,
    trials: u64,
    witnesses: Vec<Witness>,
}

impl Acc {
    fn new() -> Self {
        Self { passed: true, deviation: 0.0, trials: 0, witnesses: Vec::new() }
    }

    fn record(&mut self, dev: f64, tol: f64, witness: impl FnOnce(f64) -> Witness) {
        self.trials += 1;
        self.deviation = self.deviation.max(dev);
        if dev > tol {
            self.passed = false;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness(dev));
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            passed: self.passed,
            deviation: self.deviation,
            trials: self.trials,
            witnesses: self.witnesses,
        }
    }
}

fn eval(d: &Distribution, p: Exponent) -> f64 {
    measures::g_p(d, p).expect("exponent was validated at construction").value
}

/// Scale invariance: `G_p(lambda x) = G_p(x)` for each positive `lambda`.
pub fn check_scale_invariance(
    p: Exponent,
    d: &Distribution,
    lambdas: &[f64],
    tol: f64,
) -> CheckOutcome {
    let base = eval(d, p);
    let mut acc = Acc::new();
    for &lambda in lambdas {
        assert!(lambda.is_finite() && lambda > 0.0, "scale factors must be positive");
        let scaled = d.scaled(lambda).expect("positive rescale preserves validity");
        let val = eval(&scaled, p);
        acc.record((val - base).abs(), tol, |dev| Witness {
            distributions: vec![d.clone()],
            parameter: Some(lambda),
            observed: vec![base, val],
            deviation: dev,
        });
    }
    acc.finish()
}

/// Permutation invariance over `n_perms` sampled shuffles.
pub fn check_symmetry(p: Exponent, d: &Distribution, n_perms: usize, seed: u64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = eval(d, p);
    let mut acc = Acc::new();
    for _ in 0..n_perms {
        let mut values = d.values().to_vec();
        values.shuffle(&mut rng);
        let shuffled = Distribution::new(values).expect("permutation preserves validity");
        let val = eval(&shuffled, p);
        acc.record((val - base).abs(), SYMMETRY_TOL, |dev| Witness {
            distributions: vec![d.clone(), shuffled.clone()],
            parameter: None,
            observed: vec![base, val],
            deviation: dev,
        });
    }
    acc.finish()
}

/// The standardization grid: on `k` zeros followed by an even split of a
/// unit total, the measure reads `k / n`, for every `0 <= k < n`.
pub fn check_standardization(p: Exponent, n: usize, tol: f64) -> CheckOutcome {
    assert!(n >= 2, "standardization needs n >= 2");
    let mut acc = Acc::new();
    for k in 0..n {
        let v = Distribution::standard(n, k).expect("0 <= k < n");
        let val = eval(&v, p);
        let target = k as f64 / n as f64;
        acc.record((val - target).abs(), tol, |dev| Witness {
            distributions: vec![v.clone()],
            parameter: Some(k as f64),
            observed: vec![val, target],
            deviation: dev,
        });
    }
    acc.finish()
}

/// Mixture linearity on a comonotone equal-sum pair:
/// `G_p(beta x + (1 - beta) z) = beta G_p(x) + (1 - beta) G_p(z)`.
/// The Gini member satisfies this; other members generally do not.
pub fn check_comonotone_separability(
    p: Exponent,
    pair: &ComonotonePair,
    betas: &[MixWeight],
    tol: f64,
) -> CheckOutcome {
    let gx = eval(pair.x(), p);
    let gz = eval(pair.z(), p);
    let mut acc = Acc::new();
    for &w in betas {
        let beta = w.get();
        let mix = pair.mix(w);
        let val = eval(&mix, p);
        let expected = beta * gx + (1.0 - beta) * gz;
        acc.record((val - expected).abs(), tol, |dev| Witness {
            distributions: vec![pair.x().clone(), pair.z().clone()],
            parameter: Some(beta),
            observed: vec![val, expected],
            deviation: dev,
        });
    }
    acc.finish()
}

/// Range bound: `0 <= G_p(x) <= (n - 1) / n`, with [`BOUND_SLACK`] past the
/// upper end.
pub fn check_bounds(p: Exponent, d: &Distribution) -> CheckOutcome {
    let val = eval(d, p);
    let upper = (d.n() - 1) as f64 / d.n() as f64;
    let dev = (-val).max(val - upper).max(0.0);
    let mut acc = Acc::new();
    acc.record(dev, BOUND_SLACK, |dev| Witness {
        distributions: vec![d.clone()],
        parameter: None,
        observed: vec![val, upper],
        deviation: dev,
    });
    acc.finish()
}

/// Large-exponent limit: the finite member at `p_probe` sits within `tol`
/// of the zero share.
pub fn check_limit(d: &Distribution, p_probe: f64, tol: f64) -> CheckOutcome {
    assert!(p_probe.is_finite() && p_probe >= 1.0, "probe exponent must be finite and >= 1");
    let gp = measures::g_p_naive(d, p_probe).expect("probe exponent is valid").value;
    let gi = measures::g_infinity(d, Tolerance::default()).value;
    let mut acc = Acc::new();
    acc.record((gp - gi).abs(), tol, |dev| Witness {
        distributions: vec![d.clone()],
        parameter: Some(p_probe),
        observed: vec![gp, gi],
        deviation: dev,
    });
    acc.finish()
}

/// Gini never reads below the zero share.
pub fn check_zero_floor(d: &Distribution, tol: f64) -> CheckOutcome {
    let g1 = measures::gini_sorted(d).value;
    let floor = measures::g_infinity(d, Tolerance::default()).value;
    let mut acc = Acc::new();
    acc.record((floor - g1).max(0.0), tol, |dev| Witness {
        distributions: vec![d.clone()],
        parameter: None,
        observed: vec![g1, floor],
        deviation: dev,
    });
    acc.finish()
}

/// The three `p = 2` routes agree: angle to the ones direction, the moments
/// closed form, and the definitional pairwise sum.
pub fn check_g2_equivalence(d: &Distribution, tol: f64) -> CheckOutcome {
    let angle = measures::angle_inequality(d).value;
    let closed = measures::g2_closed(d).value;
    let naive = measures::g_p_naive(d, 2.0).expect("2 is a valid exponent").value;
    let dev = (angle - closed).abs().max((closed - naive).abs());
    let mut acc = Acc::new();
    acc.record(dev, tol, |dev| Witness {
        distributions: vec![d.clone()],
        parameter: None,
        observed: vec![angle, closed, naive],
        deviation: dev,
    });
    acc.finish()
}

fn require_equal_n(x: &Distribution, y: &Distribution) -> Result<(), SuiteError> {
    if x.n() != y.n() {
        return Err(SuiteError::DimensionMismatch { left: x.n(), right: y.n() });
    }
    Ok(())
}

fn require_matched(
    what: &str,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(), SuiteError> {
    if (a - b).abs() > tol * a.abs().max(1.0) {
        return Err(SuiteError::PreconditionViolated {
            detail: format!("{what} must match: {a} vs {b}"),
        });
    }
    Ok(())
}

/// Appending the same entry to two equal-sum vectors with equal `p = 2`
/// values yields equal `p = 2` values again.
pub fn check_g2_extension_invariance(
    x: &Distribution,
    y: &Distribution,
    a: f64,
    tol: f64,
) -> Result<CheckOutcome, SuiteError> {
    require_equal_n(x, y)?;
    require_matched("sums", x.total(), y.total(), tol)?;
    let g2x = measures::g2_closed(x).value;
    let g2y = measures::g2_closed(y).value;
    require_matched("base values", g2x, g2y, tol)?;
    let ext_x = x.append(a).map_err(|e| SuiteError::PreconditionViolated {
        detail: format!("appended entry must be admissible: {e}"),
    })?;
    let ext_y = y.append(a).expect("same entry admissible for both");
    let vx = measures::g2_closed(&ext_x).value;
    let vy = measures::g2_closed(&ext_y).value;
    let mut acc = Acc::new();
    acc.record((vx - vy).abs(), tol, |dev| Witness {
        distributions: vec![x.clone(), y.clone()],
        parameter: Some(a),
        observed: vec![vx, vy],
        deviation: dev,
    });
    Ok(acc.finish())
}

/// Concatenating matched blocks preserves `p = 2` agreement: with
/// `sum x = sum y`, `sum z = sum t`, `G_2(x) = G_2(y)`, `G_2(z) = G_2(t)`,
/// the concatenations `[x, z]` and `[y, t]` agree as well.
pub fn check_g2_concat_invariance(
    x: &Distribution,
    y: &Distribution,
    z: &Distribution,
    t: &Distribution,
    tol: f64,
) -> Result<CheckOutcome, SuiteError> {
    require_equal_n(x, y)?;
    require_equal_n(z, t)?;
    require_matched("head sums", x.total(), y.total(), tol)?;
    require_matched("tail sums", z.total(), t.total(), tol)?;
    require_matched("head values", measures::g2_closed(x).value, measures::g2_closed(y).value, tol)?;
    require_matched("tail values", measures::g2_closed(z).value, measures::g2_closed(t).value, tol)?;
    let vx = measures::g2_closed(&x.concat(z)).value;
    let vy = measures::g2_closed(&y.concat(t)).value;
    let mut acc = Acc::new();
    acc.record((vx - vy).abs(), tol, |dev| Witness {
        distributions: vec![x.clone(), y.clone(), z.clone(), t.clone()],
        parameter: None,
        observed: vec![vx, vy],
        deviation: dev,
    });
    Ok(acc.finish())
}

fn int_pairwise_diff_sum(v: &[i64]) -> i64 {
    let mut s = 0;
    for j in 1..v.len() {
        for i in 0..j {
            s += (v[j] - v[i]).abs();
        }
    }
    s
}

fn merge_witness(x: &[i64], y: &[i64], a: i64) -> Witness {
    let to_dist = |v: &[i64]| {
        Distribution::new(v.iter().map(|&i| i as f64).collect::<Vec<_>>())
            .expect("witness entries are non-negative with a positive sum")
    };
    let dx = to_dist(x);
    let dy = to_dist(y);
    let gx = measures::gini_naive(&dx).value;
    let gy = measures::gini_naive(&dy).value;
    let gxa = measures::gini_naive(&dx.append(a as f64).expect("a >= 0")).value;
    let gya = measures::gini_naive(&dy.append(a as f64).expect("a >= 0")).value;
    Witness {
        distributions: vec![dx, dy],
        parameter: Some(a as f64),
        observed: vec![gx, gy, gxa, gya],
        deviation: (gxa - gya).abs(),
    }
}

/// Hunts for Gini's failure of merge consistency: pairs with equal Gini and
/// equal sums that disagree after appending the same entry. Verifies a
/// known witness (`x = (1,4,5)`, `y = (2,2,6)`, `a = 2`) first, then
/// rejection-samples small integer grids; the equal-sum, equal-difference
/// constraints are checked in exact integer arithmetic, so every reported
/// witness is genuine.
pub fn find_gini_merge_counterexample(seed: u64, trials: u64) -> CheckOutcome {
    let mut witnesses = vec![merge_witness(&[1, 4, 5], &[2, 2, 6], 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let n = if rng.gen_bool(0.5) { 3 } else { 4 };
        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        let y: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        if x.iter().sum::<i64>() != y.iter().sum::<i64>() {
            continue;
        }
        if x.iter().all(|&v| v == 0) || y.iter().all(|&v| v == 0) {
            continue;
        }
        if int_pairwise_diff_sum(&x) != int_pairwise_diff_sum(&y) {
            continue;
        }
        let mut sx = x.clone();
        let mut sy = y.clone();
        sx.sort_unstable();
        sy.sort_unstable();
        if sx == sy {
            // Identical multisets extend identically.
            continue;
        }
        for a in 0..=9i64 {
            let da_x: i64 = x.iter().map(|&v| (v - a).abs()).sum();
            let da_y: i64 = y.iter().map(|&v| (v - a).abs()).sum();
            if da_x != da_y {
                if witnesses.len() < MAX_WITNESSES {
                    witnesses.push(merge_witness(&x, &y, a));
                }
                break;
            }
        }
    }
    let deviation = witnesses.iter().map(|w| w.deviation).fold(0.0, f64::max);
    CheckOutcome { passed: true, deviation, trials: trials + 1, witnesses }
}

/// Hunts for mixture-linearity violations at exponent `p` over random
/// comonotone equal-sum pairs. Finds nothing at `p = 1`; at other finite
/// exponents witnesses with deviations far above noise appear quickly.
pub fn find_separability_violation(p: Exponent, seed: u64, trials: u64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();
    let mut deviation: f64 = 0.0;
    for _ in 0..trials {
        let n = rng.gen_range(3..=8);
        let pair = comonotone_pair_from_rng(n, &mut rng);
        let beta = rng.gen_range(0.1..=0.9);
        let gx = eval(pair.x(), p);
        let gz = eval(pair.z(), p);
        let mix = pair.mix(MixWeight(beta));
        let val = eval(&mix, p);
        let dev = (val - (beta * gx + (1.0 - beta) * gz)).abs();
        deviation = deviation.max(dev);
        if dev > WITNESS_MIN_DEVIATION && witnesses.len() < MAX_WITNESSES {
            witnesses.push(Witness {
                distributions: vec![pair.x().clone(), pair.z().clone()],
                parameter: Some(beta),
                observed: vec![val, gx, gz],
                deviation: dev,
            });
        }
    }
    CheckOutcome { passed: !witnesses.is_empty(), deviation, trials, witnesses }
}
