//! The `bench` subcommand: times the Gini routes on synthetic data and
//! cross-checks the fast paths against the pairwise route where feasible.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ineq::{g2_closed, g_p_naive, gini_naive, gini_sorted, Distribution, NAIVE_FEASIBLE_MAX};

use crate::error::CliError;
use crate::output::{envelope, sig12, Format};

/// The fast routes must agree with the pairwise route to this relative
/// tolerance wherever the pairwise route is feasible.
const DISAGREEMENT_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Algo {
    Naive,
    Sorted,
    Moments,
}

impl Algo {
    fn parse(tag: &str) -> Result<Self, CliError> {
        match tag {
            "naive" => Ok(Algo::Naive),
            "sorted" => Ok(Algo::Sorted),
            "moments" => Ok(Algo::Moments),
            other => Err(CliError::param(format!(
                "unknown algorithm '{other}' (expected naive, sorted, or moments)"
            ))),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Algo::Naive => "naive",
            Algo::Sorted => "sorted",
            Algo::Moments => "moments",
        }
    }
}

fn sample_data(n: usize, seed: u64) -> Distribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<f64> = (0..n)
        .map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..10.0) })
        .collect();
    if values.iter().all(|&v| v == 0.0) {
        *values.last_mut().unwrap() = 1.0;
    }
    Distribution::new(values).expect("sampled vector is valid")
}

fn best_of(reps: u32, mut f: impl FnMut() -> f64) -> (Duration, f64) {
    let mut best = Duration::MAX;
    let mut value = 0.0;
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        value = f();
        best = best.min(start.elapsed());
    }
    (best, value)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

struct BenchRow {
    n: usize,
    algo: Algo,
    seconds: Option<f64>,
    value: Option<f64>,
    disagreement: Option<f64>,
}

/// Runs the benchmark grid and renders it. The boolean is false when a fast
/// route drifts from the pairwise route beyond the pinned tolerance.
pub fn run(
    ns: &[usize],
    algo_tags: &[String],
    seed: u64,
    reps: u32,
    format: Format,
    command: &str,
) -> Result<(String, bool), CliError> {
    let algos: Vec<Algo> =
        algo_tags.iter().map(|t| Algo::parse(t)).collect::<Result<_, _>>()?;
    for &n in ns {
        if n < 2 {
            return Err(CliError::param(format!("bench size must be at least 2, got {n}")));
        }
    }

    let mut rows = Vec::new();
    let mut agree = true;
    for &n in ns {
        let data = sample_data(n, seed ^ n as u64);
        let feasible = n <= NAIVE_FEASIBLE_MAX;
        let reference = feasible.then(|| gini_naive(&data).value);
        let reference_p2 = (feasible && algos.contains(&Algo::Moments))
            .then(|| g_p_naive(&data, 2.0).expect("exponent 2 is valid").value);

        for &algo in &algos {
            let row = match algo {
                Algo::Naive if !feasible => BenchRow {
                    n,
                    algo,
                    seconds: None,
                    value: None,
                    disagreement: None,
                },
                Algo::Naive => {
                    let (elapsed, value) = best_of(reps, || gini_naive(&data).value);
                    BenchRow {
                        n,
                        algo,
                        seconds: Some(elapsed.as_secs_f64()),
                        value: Some(value),
                        disagreement: None,
                    }
                }
                Algo::Sorted => {
                    let (elapsed, value) = best_of(reps, || gini_sorted(&data).value);
                    let disagreement = reference.map(|r| relative_gap(value, r));
                    BenchRow {
                        n,
                        algo,
                        seconds: Some(elapsed.as_secs_f64()),
                        value: Some(value),
                        disagreement,
                    }
                }
                Algo::Moments => {
                    let (elapsed, value) = best_of(reps, || g2_closed(&data).value);
                    let disagreement = reference_p2.map(|r| relative_gap(value, r));
                    BenchRow {
                        n,
                        algo,
                        seconds: Some(elapsed.as_secs_f64()),
                        value: Some(value),
                        disagreement,
                    }
                }
            };
            if row.disagreement.is_some_and(|d| d > DISAGREEMENT_LIMIT) {
                agree = false;
            }
            rows.push(row);
        }
    }

    let text = match format {
        Format::Json => {
            let results: Vec<Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "kind": "bench",
                        "n": row.n,
                        "algorithm": row.algo.label(),
                        "reps": reps,
                        "seconds": row.seconds,
                        "value": row.value,
                        "display": row.value.map(sig12),
                        "relative_disagreement": row.disagreement,
                        "skipped": row.seconds.is_none(),
                    })
                })
                .collect();
            envelope(command, results)
        }
        Format::Csv => {
            let mut out = String::from("n,algorithm,seconds,value,relative_disagreement\n");
            for row in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n,
                    row.algo.label(),
                    row.seconds.map_or(String::new(), |s| format!("{s:.6}")),
                    row.value.map_or(String::new(), sig12),
                    row.disagreement.map_or(String::new(), |d| format!("{d:e}")),
                ));
            }
            out
        }
        Format::Plain => {
            let mut out = String::new();
            for row in &rows {
                let line = match (row.seconds, row.value) {
                    (Some(seconds), Some(value)) => {
                        let gap = row
                            .disagreement
                            .map_or(String::new(), |d| format!(" disagreement={d:.3e}"));
                        format!(
                            "n={} {} seconds={:.6} value={}{}",
                            row.n,
                            row.algo.label(),
                            seconds,
                            sig12(value),
                            gap
                        )
                    }
                    _ => format!(
                        "n={} {} skipped (pairwise cutoff is {})",
                        row.n,
                        row.algo.label(),
                        NAIVE_FEASIBLE_MAX
                    ),
                };
                out.push_str(&line);
                out.push('\n');
            }
            out
        }
    };
    Ok((text, agree))
}
