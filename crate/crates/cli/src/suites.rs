//! The `check` subcommand: named property rows with expectations, optional
//! worker-pool execution, and plain/CSV/JSON rendering.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ineq::analysis;
use ineq::suite::{self, CheckOutcome, MixWeight, Witness};
use ineq::{Distribution, Exponent};

use crate::error::CliError;
use crate::output::Format;

/// What a row must do for the run to succeed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    /// Every evaluated case stays within tolerance.
    Pass,
    /// The search locates at least one witness.
    WitnessSearch,
    /// The property does not apply at this parameter point.
    NotApplicable,
}

impl Expectation {
    fn met(self, outcome: &CheckOutcome) -> bool {
        match self {
            Expectation::Pass | Expectation::WitnessSearch => outcome.passed,
            Expectation::NotApplicable => true,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Expectation::Pass => "pass",
            Expectation::WitnessSearch => "witness-search",
            Expectation::NotApplicable => "not-applicable",
        }
    }
}

type Task = Box<dyn Fn() -> CheckOutcome + Send + Sync>;

pub struct SuiteRow {
    name: String,
    expectation: Expectation,
    task: Task,
}

fn row_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn empty_pass() -> CheckOutcome {
    CheckOutcome { passed: true, deviation: 0.0, trials: 0, witnesses: Vec::new() }
}

fn fold(outcomes: impl Iterator<Item = CheckOutcome>) -> CheckOutcome {
    outcomes.reduce(CheckOutcome::merge).unwrap_or_else(empty_pass)
}

fn random_distribution(rng: &mut ChaCha8Rng) -> Distribution {
    let n = rng.gen_range(2..=64);
    let mut values: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..10.0) })
        .collect();
    if values.iter().all(|&v| v == 0.0) {
        *values.last_mut().unwrap() = rng.gen_range(1.0..10.0);
    }
    Distribution::new(values).expect("sampled vector is valid")
}

fn grid_distribution(rng: &mut ChaCha8Rng) -> Distribution {
    let n = rng.gen_range(2..=64);
    let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=5) as f64 * 0.2).collect();
    if values.iter().all(|&v| v == 0.0) {
        *values.last_mut().unwrap() = 1.0;
    }
    Distribution::new(values).expect("sampled vector is valid")
}

/// Integer pairs with matching sums and sums of squares, for the `p = 2`
/// extension and concatenation rows.
fn equal_moment_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut buckets: HashMap<(usize, i64, i64), Vec<Vec<i64>>> = HashMap::new();
    let mut pairs = Vec::new();
    let mut attempts: u64 = 0;
    let budget = 20_000 * count as u64;
    while pairs.len() < count && attempts < budget {
        attempts += 1;
        let n = rng.gen_range(3..=5);
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let s: i64 = v.iter().sum();
        let q: i64 = v.iter().map(|&x| x * x).sum();
        let bucket = buckets.entry((n, s, q)).or_default();
        let mut sorted = v.clone();
        sorted.sort_unstable();
        let duplicate = bucket.iter().any(|held| {
            let mut hs = held.clone();
            hs.sort_unstable();
            hs == sorted
        });
        if duplicate {
            continue;
        }
        if let Some(partner) = bucket.first().cloned() {
            pairs.push((partner, v.clone()));
        }
        bucket.push(v);
    }
    pairs
}

fn to_distribution(values: &[i64]) -> Distribution {
    Distribution::new(values.iter().map(|&v| v as f64).collect::<Vec<_>>())
        .expect("integer vectors with a positive entry are valid")
}

fn push_axiom_rows(rows: &mut Vec<SuiteRow>, ps: &[Exponent], trials: u64, seed: u64) {
    for &p in ps {
        let rseed = row_seed(seed, rows.len());
        rows.push(SuiteRow {
            name: format!("A1 scale invariance (p={p})"),
            expectation: Expectation::Pass,
            task: Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(rseed);
                fold((0..trials).map(|_| {
                    let d = random_distribution(&mut rng);
                    suite::check_scale_invariance(p, &d, &[1e-6, 0.5, 3.0, 1e6], 1e-12)
                }))
            }),
        });

        let rseed = row_seed(seed, rows.len());
        rows.push(SuiteRow {
            name: format!("A2 permutation symmetry (p={p})"),
            expectation: Expectation::Pass,
            task: Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(rseed);
                fold((0..trials).map(|_| {
                    let d = random_distribution(&mut rng);
                    let perm_seed = rng.gen();
                    suite::check_symmetry(p, &d, 4, perm_seed)
                }))
            }),
        });

        rows.push(SuiteRow {
            name: format!("A3 standardization (p={p})"),
            expectation: Expectation::Pass,
            task: Box::new(move || {
                fold((2..=16).map(|n| suite::check_standardization(p, n, 1e-12)))
            }),
        });

        let rseed = row_seed(seed, rows.len());
        let name = format!("A4 comonotone separability (p={p})");
        match p {
            Exponent::Finite(1.0) => rows.push(SuiteRow {
                name,
                expectation: Expectation::Pass,
                task: Box::new(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(rseed);
                    let betas: Vec<MixWeight> = (1..10)
                        .map(|i| MixWeight::new(i as f64 / 10.0).expect("grid weight"))
                        .collect();
                    fold((0..trials).map(|_| {
                        let n = rng.gen_range(2..=16);
                        let pair = suite::make_comonotone_pair(n, rng.gen());
                        suite::check_comonotone_separability(p, &pair, &betas, 1e-10)
                    }))
                }),
            }),
            Exponent::Finite(_) => rows.push(SuiteRow {
                name,
                expectation: Expectation::WitnessSearch,
                task: Box::new(move || {
                    suite::find_separability_violation(p, rseed, trials.min(500))
                }),
            }),
            // The linearity axiom is stated for mixtures the zero-share
            // member cannot grade; there is nothing to check at p = inf.
            Exponent::Infinity => rows.push(SuiteRow {
                name,
                expectation: Expectation::NotApplicable,
                task: Box::new(empty_pass),
            }),
        }
    }
}

fn push_proposition_rows(rows: &mut Vec<SuiteRow>, trials: u64, seed: u64) {
    let bound_ps = [
        Exponent::Finite(1.0),
        Exponent::Finite(1.5),
        Exponent::Finite(2.0),
        Exponent::Finite(3.0),
        Exponent::Finite(10.0),
        Exponent::Infinity,
    ];
    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "range bound over p in {1, 1.5, 2, 3, 10, inf}".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(rseed);
            fold((0..trials).map(|_| {
                let d = random_distribution(&mut rng);
                fold(bound_ps.iter().map(|&p| suite::check_bounds(p, &d)))
            }))
        }),
    });

    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "zero-share limit at p=600".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(rseed);
            fold((0..trials.min(300)).map(|_| {
                let d = grid_distribution(&mut rng);
                suite::check_limit(&d, 600.0, 1e-9)
            }))
        }),
    });

    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "angle route equivalence at p=2".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(rseed);
            fold((0..trials).map(|_| {
                let d = random_distribution(&mut rng);
                suite::check_g2_equivalence(&d, 1e-12)
            }))
        }),
    });

    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "Gini floor at the zero share".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(rseed);
            fold((0..trials).map(|_| {
                let d = random_distribution(&mut rng);
                suite::check_zero_floor(&d, 1e-12)
            }))
        }),
    });

    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "extension invariance at p=2".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(rseed);
            let pairs = equal_moment_pairs(&mut rng, trials.min(200) as usize);
            fold(pairs.iter().flat_map(|(x, y)| {
                let dx = to_distribution(x);
                let dy = to_distribution(y);
                [0.0, 0.5, 1.0, 2.0, 10.0].map(move |a| {
                    suite::check_g2_extension_invariance(&dx, &dy, a, 1e-12)
                        .expect("generated pairs satisfy the preconditions")
                })
            }))
        }),
    });

    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "concatenation invariance at p=2".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(rseed);
            let pairs = equal_moment_pairs(&mut rng, trials.min(200) as usize);
            fold(pairs.windows(2).map(|w| {
                let (x, y) = (&w[0].0, &w[0].1);
                let (z, t) = (&w[1].0, &w[1].1);
                suite::check_g2_concat_invariance(
                    &to_distribution(x),
                    &to_distribution(y),
                    &to_distribution(z),
                    &to_distribution(t),
                    1e-12,
                )
                .expect("generated pairs satisfy the preconditions")
            }))
        }),
    });

    rows.push(SuiteRow {
        name: "two-point closed form and halving rate".to_string(),
        expectation: Expectation::Pass,
        task: Box::new(move || {
            let two = Distribution::new(vec![1.0, 2.0]).expect("valid");
            let mut values = Vec::new();
            let formula_match = fold((1..=25).map(|p| {
                let direct =
                    ineq::g_p(&two, Exponent::Finite(p as f64)).expect("valid exponent").value;
                let formula = analysis::two_point_closed_form(p as f64).expect("valid exponent");
                values.push(direct);
                let dev = (direct - formula).abs();
                CheckOutcome {
                    passed: dev <= 1e-12,
                    deviation: dev,
                    trials: 1,
                    witnesses: Vec::new(),
                }
            }));
            let ratio_window = fold((5..=24).map(|i: usize| {
                let ratio = values[i] / values[i - 1];
                let dev = (ratio - 0.5).abs();
                CheckOutcome {
                    passed: (0.49..=0.51).contains(&ratio),
                    deviation: dev,
                    trials: 1,
                    witnesses: Vec::new(),
                }
            }));
            formula_match.merge(ratio_window)
        }),
    });
}

fn push_counterexample_rows(rows: &mut Vec<SuiteRow>, trials: u64, seed: u64) {
    let rseed = row_seed(seed, rows.len());
    rows.push(SuiteRow {
        name: "Gini merge counterexample search".to_string(),
        expectation: Expectation::WitnessSearch,
        task: Box::new(move || suite::find_gini_merge_counterexample(rseed, trials.max(1000))),
    });
}

/// Assembles the rows for a suite tag.
pub fn build_rows(
    suite_tag: &str,
    ps: &[Exponent],
    trials: u64,
    seed: u64,
) -> Result<Vec<SuiteRow>, CliError> {
    let mut rows = Vec::new();
    match suite_tag {
        "axioms" => push_axiom_rows(&mut rows, ps, trials, seed),
        "propositions" => push_proposition_rows(&mut rows, trials, seed),
        "counterexample" => push_counterexample_rows(&mut rows, trials, seed),
        "all" => {
            push_axiom_rows(&mut rows, ps, trials, seed);
            push_proposition_rows(&mut rows, trials, seed);
            push_counterexample_rows(&mut rows, trials, seed);
        }
        other => {
            return Err(CliError::param(format!(
                "unknown suite '{other}' (expected axioms, propositions, counterexample, or all)"
            )))
        }
    }
    Ok(rows)
}

/// Runs every row, optionally fanning out across `jobs` workers. Each row
/// derives its randomness from its own seed, so results are identical at
/// any worker count and are aggregated in row order.
pub fn run_rows(rows: &[SuiteRow], jobs: usize) -> Vec<CheckOutcome> {
    if jobs <= 1 || rows.len() <= 1 {
        return rows.iter().map(|r| (r.task)()).collect();
    }
    let slots: Vec<Mutex<Option<CheckOutcome>>> = rows.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(rows.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= rows.len() {
                    break;
                }
                let outcome = (rows[i].task)();
                *slots[i].lock().expect("no poisoned slots") = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("no poisoned slots").expect("every row ran"))
        .collect()
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "distributions": w.distributions.iter().map(|d| d.values().to_vec()).collect::<Vec<_>>(),
        "parameter": w.parameter,
        "observed": w.observed,
        "deviation": w.deviation,
    })
}

fn witness_plain(w: &Witness) -> String {
    let vectors: Vec<String> =
        w.distributions.iter().map(|d| format!("{:?}", d.values())).collect();
    let parameter = w.parameter.map_or(String::new(), |p| format!(", parameter={p}"));
    format!(
        "    witness: {}{}, observed={:?}, deviation={:.6e}",
        vectors.join(" / "),
        parameter,
        w.observed,
        w.deviation
    )
}

/// Renders the report and says whether every row met its expectation.
pub fn render(
    rows: &[SuiteRow],
    outcomes: &[CheckOutcome],
    format: Format,
    command: &str,
) -> (String, bool) {
    let all_met = rows
        .iter()
        .zip(outcomes)
        .all(|(row, outcome)| row.expectation.met(outcome));
    let text = match format {
        Format::Json => {
            let results: Vec<Value> = rows
                .iter()
                .zip(outcomes)
                .map(|(row, outcome)| {
                    json!({
                        "kind": "check",
                        "name": row.name,
                        "expectation": row.expectation.label(),
                        "met": row.expectation.met(outcome),
                        "passed": outcome.passed,
                        "deviation": outcome.deviation,
                        "trials": outcome.trials,
                        "witnesses": outcome.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            crate::output::envelope(command, results)
        }
        Format::Csv => {
            let mut out = String::from("name,expectation,met,passed,deviation,trials,witnesses\n");
            for (row, outcome) in rows.iter().zip(outcomes) {
                out.push_str(&format!(
                    "{},{},{},{},{:e},{},{}\n",
                    row.name.replace(',', ";"),
                    row.expectation.label(),
                    row.expectation.met(outcome),
                    outcome.passed,
                    outcome.deviation,
                    outcome.trials,
                    outcome.witnesses.len(),
                ));
            }
            out
        }
        Format::Plain => {
            let mut out = String::new();
            for (row, outcome) in rows.iter().zip(outcomes) {
                let line = if row.expectation == Expectation::NotApplicable {
                    format!("N/A  {}", row.name)
                } else if row.expectation.met(outcome) {
                    format!(
                        "PASS {} (deviation={:.3e}, trials={})",
                        row.name, outcome.deviation, outcome.trials
                    )
                } else {
                    format!(
                        "FAIL {} (deviation={:.3e}, trials={})",
                        row.name, outcome.deviation, outcome.trials
                    )
                };
                out.push_str(&line);
                out.push('\n');
                // Witnesses are the payload: show them when a search finds
                // one and when a pass-style check breaks.
                let show = match row.expectation {
                    Expectation::WitnessSearch => !outcome.witnesses.is_empty(),
                    Expectation::Pass => !row.expectation.met(outcome),
                    Expectation::NotApplicable => false,
                };
                if show {
                    for w in outcome.witnesses.iter().take(2) {
                        out.push_str(&witness_plain(w));
                        out.push('\n');
                    }
                }
            }
            out
        }
    };
    (text, all_met)
}
