//! End-to-end tests for the `ineq` binary: frozen outputs, exit codes,
//! format contracts, and determinism across worker counts.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ineq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ineq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ineq_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ineq"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts writes");
    child.wait_with_output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

#[test]
fn compute_prints_twelve_significant_digits() {
    let out = ineq(&["compute", "gini", "--inline", "0,0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0.666666666667\n");

    let out = ineq(&["compute", "gp", "--p", "2", "--inline", "1,2,3,4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0.166666666667\n");

    let out = ineq(&["compute", "gp", "--p", "inf", "--inline", "0,1,2,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0.250000000000\n");
}

#[test]
fn pair_measures_take_two_inline_vectors() {
    let out = ineq(&["compute", "angle-dispro", "--inline-x", "1,0", "--inline-y", "0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "1.00000000000\n");

    let out = ineq(&["compute", "cosine", "--inline-x", "1,0", "--inline-y", "0,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0\n");

    // Mismatched lengths are a data problem, not a usage problem.
    let out = ineq(&["compute", "cosine", "--inline-x", "1,2", "--inline-y", "1,2,3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn csv_file_and_inline_agree_bitwise() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "income\n3\n1\n4\n1\n5").expect("temp file accepts writes");
    let path = file.path().to_str().expect("utf-8 path");

    let from_file = ineq(&["compute", "gini", "--input", path, "--column", "income"]);
    let from_inline = ineq(&["compute", "gini", "--inline", "3,1,4,1,5"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(code(&from_inline), 0);
    assert_eq!(stdout_of(&from_file), stdout_of(&from_inline));
}

#[test]
fn json_file_and_stdin_are_accepted() {
    let mut file = tempfile::NamedTempFile::with_suffix(".json").expect("temp file");
    write!(file, "[1, 2, 3]").expect("temp file accepts writes");
    let path = file.path().to_str().expect("utf-8 path");

    let out = ineq(&["compute", "gini", "--input", path]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0.222222222222\n");

    let out = ineq_with_stdin(&["compute", "gini", "--input", "-"], "2\n4\n6\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0.222222222222\n");
}

#[test]
fn blank_csv_rows_are_skipped_with_a_warning() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "1\n\n2\n\n3").expect("temp file accepts writes");
    let path = file.path().to_str().expect("utf-8 path");

    let out = ineq(&["compute", "gini", "--input", path]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "0.222222222222\n");
    assert!(stderr_of(&out).contains("blank row"), "stderr: {}", stderr_of(&out));
}

#[test]
fn csv_diagnostics_name_the_offending_row() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "1\n2\nbad").expect("temp file accepts writes");
    let path = file.path().to_str().expect("utf-8 path");

    let out = ineq(&["compute", "gini", "--input", path]);
    assert_eq!(code(&out), 2);
    let err = stderr_of(&out);
    assert!(err.contains("row 3"), "stderr: {err}");
    assert!(err.contains("'bad'"), "stderr: {err}");

    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "1\n2,3").expect("temp file accepts writes");
    let path = file.path().to_str().expect("utf-8 path");

    let out = ineq(&["compute", "gini", "--input", path]);
    assert_eq!(code(&out), 2);
    let err = stderr_of(&out);
    assert!(err.contains("row 2"), "stderr: {err}");
    assert!(err.contains("expected 1"), "stderr: {err}");
}

#[test]
fn sweep_ramp_rows_are_frozen() {
    let out = ineq(&["sweep", "--p", "1,2,3,inf", "--inline", "0,1,2,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_of(&out),
        "p,value\n1,0.416666666667\n2,0.357142857143\n3,0.319444444444\ninf,0.250000000000\n"
    );
}

#[test]
fn sweep_unbiased_mode_matches_published_roundings() {
    let out = ineq(&[
        "sweep",
        "--p",
        "1,2,3",
        "--denominator",
        "unbiased",
        "--inline",
        "0,1,2,3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|line| {
            line.split(',').nth(1).expect("two columns").parse().expect("numeric value")
        })
        .collect();
    let rounded: Vec<i64> = values.iter().map(|v| (v * 1000.0).round() as i64).collect();
    assert_eq!(rounded, vec![556, 476, 426]);
}

#[test]
fn sweep_reads_zero_on_a_flat_vector() {
    let out = ineq(&["sweep", "--p", "1", "--inline", "5,5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out), "p,value\n1,0\n");
}

#[test]
fn json_envelope_carries_schema_and_command() {
    let out = ineq(&["compute", "gini", "--inline", "0,0,1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("stdout is JSON");
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["command"], "compute gini --inline 0,0,1 --format json");
    let result = &doc["results"][0];
    assert_eq!(result["kind"], "measure");
    assert_eq!(result["measure"], "g_p");
    assert_eq!(result["algorithm"], "sorted");
    assert_eq!(result["n"], 3);
    assert_eq!(result["display"], "0.666666666667");
    let value = result["value"].as_f64().expect("numeric value");
    assert!((value - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn check_counterexample_reports_the_merge_witness() {
    let out = ineq(&["check", "--suite", "counterexample", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&stdout_of(&out)).expect("stdout is JSON");
    let row = &doc["results"][0];
    assert_eq!(row["expectation"], "witness-search");
    assert_eq!(row["met"], true);
    let witness = &row["witnesses"][0];
    assert_eq!(witness["distributions"][0], serde_json::json!([1.0, 4.0, 5.0]));
    assert_eq!(witness["distributions"][1], serde_json::json!([2.0, 2.0, 6.0]));
    assert_eq!(witness["parameter"], 2.0);
    // Both vectors share a Gini reading until the common entry is appended.
    let observed = witness["observed"].as_array().expect("observed array");
    assert_eq!(observed[0], observed[1]);
    assert_ne!(observed[2], observed[3]);
}

#[test]
fn check_axioms_at_infinity_mark_separability_not_applicable() {
    let out = ineq(&["check", "--suite", "axioms", "--p", "inf"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("N/A  A4 comonotone separability (p=inf)"), "stdout: {text}");
    assert!(text.contains("PASS A1"), "stdout: {text}");
    assert!(text.contains("PASS A3"), "stdout: {text}");
}

#[test]
fn check_axioms_find_separability_violations_off_gini() {
    let out = ineq(&["check", "--suite", "axioms", "--p", "2", "--trials", "200"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("PASS A4 comonotone separability (p=2)"), "stdout: {text}");
    assert!(text.contains("witness:"), "stdout: {text}");
}

#[test]
fn check_is_deterministic_across_worker_counts() {
    let args = ["check", "--suite", "axioms", "--p", "1,2", "--trials", "60", "--seed", "7"];
    let serial = ineq(&args);
    let mut parallel_args = args.to_vec();
    parallel_args.extend(["--jobs", "3"]);
    let parallel = ineq(&parallel_args);
    assert_eq!(code(&serial), 0);
    assert_eq!(code(&parallel), 0);
    assert_eq!(stdout_of(&serial), stdout_of(&parallel));

    let again = ineq(&args);
    assert_eq!(stdout_of(&serial), stdout_of(&again));
}

#[test]
fn check_exits_one_when_a_search_comes_up_empty() {
    // Zero trials leave the p=2 separability search without a witness.
    let out = ineq(&["check", "--suite", "axioms", "--p", "2", "--trials", "0"]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("FAIL A4"), "stdout: {text}");
}

#[test]
fn bench_rows_cross_check_the_fast_routes() {
    let out = ineq(&["bench", "--n", "64", "--reps", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,algorithm,seconds,value,relative_disagreement");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("64,naive,"));
    assert!(lines[2].starts_with("64,sorted,"));
    assert!(lines[3].starts_with("64,moments,"));
    for line in &lines[2..] {
        let gap: f64 = line.split(',').nth(4).expect("gap column").parse().expect("numeric");
        assert!(gap <= 1e-10, "line: {line}");
    }
}

#[test]
fn bench_skips_the_pairwise_route_past_its_cutoff() {
    let out = ineq(&["bench", "--n", "30000", "--algos", "naive,sorted", "--reps", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("naive skipped"), "stdout: {text}");
    assert!(text.contains("n=30000 sorted seconds="), "stdout: {text}");
}

#[test]
fn parameter_problems_exit_three() {
    let cases: &[&[&str]] = &[
        &["compute", "nope", "--inline", "1,2"],
        &["compute", "gp", "--inline", "1,2"],
        &["compute", "gp", "--p", "0.5", "--inline", "1,2"],
        &["compute", "gp", "--p", "abc", "--inline", "1,2"],
        &["compute", "gini", "--p", "2", "--inline", "1,2"],
        &["compute", "gini", "--inline", "1,2", "--inline-x", "1,2"],
        &["compute", "iid", "--inline", "1,2"],
        &["compute", "iid", "--alpha", "0", "--beta", "1", "--inline", "1,2"],
        &["compute", "gini", "--inline", "1,2", "--format", "yaml"],
        &["compute", "gini", "--inline", "1,2", "--column", "x"],
        &["compute", "gini"],
        &["compute", "gini", "--inline", "1,2", "--bogus"],
        &["sweep", "--p", "1,2", "--inline", "1,2", "--denominator", "odd"],
        &["sweep", "--inline", "1,2"],
        &["check", "--suite", "bogus"],
        &["check", "--jobs", "0"],
        &["bench", "--n", "1"],
        &["bench", "--n", "abc"],
        &["bench", "--algos", "quicksort"],
        &["bench", "--reps", "0"],
    ];
    for args in cases {
        let out = ineq(args);
        assert_eq!(code(&out), 3, "args: {args:?}, stderr: {}", stderr_of(&out));
    }
}

#[test]
fn input_problems_exit_two() {
    let cases: &[&[&str]] = &[
        &["compute", "gini", "--inline", "1,-2,3"],
        &["compute", "gini", "--inline", "0,0"],
        &["compute", "gini", "--inline", ""],
        &["compute", "gini", "--inline", "1,,2"],
        &["compute", "gini", "--input", "/nonexistent/data.csv"],
    ];
    for args in cases {
        let out = ineq(args);
        assert_eq!(code(&out), 2, "args: {args:?}, stderr: {}", stderr_of(&out));
    }
}

#[test]
fn help_and_version_exit_zero() {
    let out = ineq(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = ineq(&["--version"]);
    assert_eq!(code(&out), 0);
}
