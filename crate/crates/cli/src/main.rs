//! Command-line front end for the pairwise-difference inequality family.
//!
//! Exit codes: 0 on success, 1 when a check or cross-route comparison fails,
//! 2 for input problems, 3 for parameter problems.

mod bench;
mod error;
mod input;
mod output;
mod suites;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ineq::analysis::{self, DenominatorMode};
use ineq::{
    angle_disproportionality, angle_inequality, g_p_with_tolerance, gini_sorted, iid_measure,
    salton_cosine, Distribution, Exponent, IidParams, MeasureParams, MeasureReport, Tolerance,
};

use crate::error::CliError;
use crate::output::{envelope, measure_json, sig12, Format};

#[derive(Parser)]
#[command(
    name = "ineq",
    version,
    about = "Pairwise-difference inequality measures, their fast routes, and their checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure on a vector (or on a pair of vectors).
    Compute(ComputeArgs),
    /// Evaluate the family at several exponents on one vector.
    Sweep(SweepArgs),
    /// Run the axiom, proposition, and counterexample suites.
    Check(CheckArgs),
    /// Time the Gini routes and cross-check them against the pairwise route.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Measure tag: gini, gp, angle, angle-dispro, cosine, or iid.
    measure: String,
    /// Exponent for `gp`: a number >= 1, or `inf`.
    #[arg(long)]
    p: Option<String>,
    /// Difference exponent for `iid`.
    #[arg(long)]
    alpha: Option<f64>,
    /// Mean exponent for `iid`.
    #[arg(long)]
    beta: Option<f64>,
    /// Relative epsilon for classifying entries as zero (used at p = inf).
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated values, e.g. `1,2,3`.
    #[arg(long)]
    inline: Option<String>,
    /// CSV or JSON file holding the values; `-` reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Column to read when the input file has several.
    #[arg(long)]
    column: Option<String>,
    /// First vector for the two-vector measures.
    #[arg(long)]
    inline_x: Option<String>,
    /// Second vector for the two-vector measures.
    #[arg(long)]
    inline_y: Option<String>,
    /// Output format: plain, csv, or json.
    #[arg(long, default_value = "plain")]
    format: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated exponents, e.g. `1,2,2.5,inf`.
    #[arg(long)]
    p: String,
    /// Denominator convention: def3 (all ordered pairs) or unbiased.
    #[arg(long, default_value = "def3")]
    denominator: String,
    /// Comma-separated values, e.g. `1,2,3`.
    #[arg(long)]
    inline: Option<String>,
    /// CSV or JSON file holding the values; `-` reads stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Column to read when the input file has several.
    #[arg(long)]
    column: Option<String>,
    /// Output format: plain, csv, or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Suite tag: axioms, propositions, counterexample, or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Randomised cases per row.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Seed for the whole run; each row derives its own stream.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Comma-separated exponents for the axiom rows.
    #[arg(long)]
    p: Option<String>,
    /// Worker threads for the rows; results are identical at any count.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output format: plain, csv, or json.
    #[arg(long, default_value = "plain")]
    format: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated input sizes.
    #[arg(long, default_value = "1000")]
    n: String,
    /// Comma-separated routes: naive, sorted, moments.
    #[arg(long, default_value = "naive,sorted,moments")]
    algos: String,
    /// Seed for the synthetic data.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Timing repetitions per row (best is reported).
    #[arg(long, default_value_t = 3)]
    reps: u32,
    /// Output format: plain, csv, or json.
    #[arg(long, default_value = "plain")]
    format: String,
}

fn main() {
    let command_echo: String =
        std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let informational = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            err.print().expect("usage text is writable");
            std::process::exit(if informational { 0 } else { 3 });
        }
    };
    let outcome = match cli.command {
        Command::Compute(args) => cmd_compute(&args, &command_echo),
        Command::Sweep(args) => cmd_sweep(&args, &command_echo),
        Command::Check(args) => cmd_check(&args, &command_echo),
        Command::Bench(args) => cmd_bench(&args, &command_echo),
    };
    if let Err(err) = outcome {
        eprintln!("error: {}", err.message);
        std::process::exit(i32::from(err.code));
    }
}

fn emit(text: String) {
    use std::io::Write;
    let trimmed = text.trim_end_matches('\n');
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if writeln!(lock, "{trimmed}").is_err() || lock.flush().is_err() {
        // Downstream hung up (e.g. piped into `head`); stop quietly.
        std::process::exit(0);
    }
}

fn forbid(condition: bool, message: &str) -> Result<(), CliError> {
    if condition {
        Err(CliError::param(message))
    } else {
        Ok(())
    }
}

fn tolerance_from(tol: Option<f64>) -> Result<Tolerance, CliError> {
    match tol {
        None => Ok(Tolerance::default()),
        Some(value) => Tolerance::new(value, 1e-12).map_err(|e| CliError::param(e.to_string())),
    }
}

fn parse_exponent(token: &str) -> Result<Exponent, CliError> {
    token.parse().map_err(|_| {
        CliError::param(format!("invalid exponent '{token}' (expected a number >= 1 or 'inf')"))
    })
}

fn parse_exponent_list(text: &str) -> Result<Vec<Exponent>, CliError> {
    let ps: Vec<Exponent> =
        text.split(',').map(|t| parse_exponent(t.trim())).collect::<Result<_, _>>()?;
    if ps.is_empty() {
        return Err(CliError::param("provide at least one exponent"));
    }
    Ok(ps)
}

fn load_vector(
    inline: Option<&str>,
    path: Option<&Path>,
    column: Option<&str>,
) -> Result<Distribution, CliError> {
    if column.is_some() && path.is_none() {
        return Err(CliError::param("--column requires --input"));
    }
    let parsed = match (inline, path) {
        (Some(text), None) => input::parse_inline(text, "inline")?,
        (None, Some(path)) => input::parse_file(path, column)?,
        (Some(_), Some(_)) => {
            return Err(CliError::param("provide --inline or --input, not both"))
        }
        (None, None) => return Err(CliError::param("provide one of --inline or --input")),
    };
    parsed.into_distribution()
}

fn params_text(report: &MeasureReport) -> String {
    match &report.params {
        None => String::new(),
        Some(MeasureParams::Exponent(p)) => format!("p={p}"),
        Some(MeasureParams::Iid(params)) => {
            format!("alpha={};beta={}", params.alpha(), params.beta())
        }
    }
}

fn cmd_compute(args: &ComputeArgs, command: &str) -> Result<(), CliError> {
    let format = Format::parse(&args.format).map_err(CliError::param)?;
    let tolerance = tolerance_from(args.tol)?;
    let pair_flags = args.inline_x.is_some() || args.inline_y.is_some();
    let single_flags = args.inline.is_some() || args.input.is_some() || args.column.is_some();

    let report = match args.measure.as_str() {
        "gini" | "angle" | "gp" => {
            forbid(pair_flags, "--inline-x/--inline-y only apply to angle-dispro and cosine")?;
            forbid(
                args.alpha.is_some() || args.beta.is_some(),
                "--alpha/--beta only apply to iid",
            )?;
            let d = load_vector(
                args.inline.as_deref(),
                args.input.as_deref(),
                args.column.as_deref(),
            )?;
            match args.measure.as_str() {
                "gini" => {
                    forbid(args.p.is_some(), "--p only applies to gp")?;
                    gini_sorted(&d)
                }
                "angle" => {
                    forbid(args.p.is_some(), "--p only applies to gp")?;
                    angle_inequality(&d)
                }
                _ => {
                    let token = args
                        .p
                        .as_deref()
                        .ok_or_else(|| CliError::param("gp requires --p"))?;
                    let p = parse_exponent(token)?;
                    g_p_with_tolerance(&d, p, tolerance)
                        .map_err(|e| CliError::param(e.to_string()))?
                }
            }
        }
        "iid" => {
            forbid(pair_flags, "--inline-x/--inline-y only apply to angle-dispro and cosine")?;
            forbid(args.p.is_some(), "--p only applies to gp")?;
            let alpha = args.alpha.ok_or_else(|| CliError::param("iid requires --alpha"))?;
            let beta = args.beta.ok_or_else(|| CliError::param("iid requires --beta"))?;
            let params =
                IidParams::new(alpha, beta).map_err(|e| CliError::param(e.to_string()))?;
            let d = load_vector(
                args.inline.as_deref(),
                args.input.as_deref(),
                args.column.as_deref(),
            )?;
            iid_measure(&d, params)
        }
        "angle-dispro" | "cosine" => {
            forbid(
                single_flags,
                "the two-vector measures take --inline-x and --inline-y only",
            )?;
            forbid(
                args.p.is_some() || args.alpha.is_some() || args.beta.is_some(),
                "the two-vector measures take no exponent parameters",
            )?;
            let x_text = args
                .inline_x
                .as_deref()
                .ok_or_else(|| CliError::param(format!("{} requires --inline-x", args.measure)))?;
            let y_text = args
                .inline_y
                .as_deref()
                .ok_or_else(|| CliError::param(format!("{} requires --inline-y", args.measure)))?;
            let x = input::parse_inline(x_text, "inline-x")?.into_distribution()?;
            let y = input::parse_inline(y_text, "inline-y")?.into_distribution()?;
            let result = if args.measure == "cosine" {
                salton_cosine(&x, &y)
            } else {
                angle_disproportionality(&x, &y)
            };
            result.map_err(|e| CliError::input(e.to_string()))?
        }
        other => {
            return Err(CliError::param(format!(
                "unknown measure '{other}' (expected gini, gp, angle, angle-dispro, cosine, or iid)"
            )))
        }
    };

    let text = match format {
        Format::Plain => format!("{}\n", sig12(report.value)),
        Format::Csv => format!(
            "measure,params,algorithm,n,value\n{},{},{},{},{}\n",
            report.measure,
            params_text(&report),
            report.algorithm,
            report.n,
            sig12(report.value)
        ),
        Format::Json => envelope(command, vec![measure_json(&report)]),
    };
    emit(text);
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, command: &str) -> Result<(), CliError> {
    let format = Format::parse(&args.format).map_err(CliError::param)?;
    let ps = parse_exponent_list(&args.p)?;
    let mode: DenominatorMode = args.denominator.parse().map_err(CliError::param)?;
    let d = load_vector(args.inline.as_deref(), args.input.as_deref(), args.column.as_deref())?;
    let table =
        analysis::p_sweep(&d, &ps, mode).map_err(|e| CliError::param(e.to_string()))?;

    let text = match format {
        // The plain rendering is the same two-column table the CSV format
        // uses; there is nothing more compact to say.
        Format::Plain | Format::Csv => {
            let mut out = String::from("p,value\n");
            for (p, value) in &table.rows {
                out.push_str(&format!("{p},{}\n", sig12(*value)));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|(p, value)| {
                    json!({"p": p.to_string(), "value": value, "display": sig12(*value)})
                })
                .collect();
            envelope(
                command,
                vec![json!({
                    "kind": "sweep",
                    "mode": table.mode.to_string(),
                    "n": table.input.n(),
                    "rows": rows,
                })],
            )
        }
    };
    emit(text);
    Ok(())
}

fn cmd_check(args: &CheckArgs, command: &str) -> Result<(), CliError> {
    let format = Format::parse(&args.format).map_err(CliError::param)?;
    if args.jobs == 0 {
        return Err(CliError::param("--jobs must be at least 1"));
    }
    let ps = match &args.p {
        Some(text) => parse_exponent_list(text)?,
        None => vec![
            Exponent::Finite(1.0),
            Exponent::Finite(2.0),
            Exponent::Finite(3.0),
            Exponent::Infinity,
        ],
    };
    let rows = suites::build_rows(&args.suite, &ps, args.trials, args.seed)?;
    let outcomes = suites::run_rows(&rows, args.jobs);
    let (text, all_met) = suites::render(&rows, &outcomes, format, command);
    emit(text);
    if all_met {
        Ok(())
    } else {
        Err(CliError::check("one or more checks did not meet their expectation"))
    }
}

fn cmd_bench(args: &BenchArgs, command: &str) -> Result<(), CliError> {
    let format = Format::parse(&args.format).map_err(CliError::param)?;
    if args.reps == 0 {
        return Err(CliError::param("--reps must be at least 1"));
    }
    let ns: Vec<usize> = args
        .n
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::param(format!("invalid size '{}'", t.trim())))
        })
        .collect::<Result<_, _>>()?;
    let algos: Vec<String> = args.algos.split(',').map(|t| t.trim().to_string()).collect();
    let (text, agree) = bench::run(&ns, &algos, args.seed, args.reps, format, command)?;
    emit(text);
    if agree {
        Ok(())
    } else {
        Err(CliError::check(
            "a fast route disagrees with the pairwise route beyond the pinned tolerance",
        ))
    }
}
