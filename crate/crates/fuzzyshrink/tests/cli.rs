//! End-to-end tests of the `fuzzyshrink` binary: exit codes, report
//! determinism, and the shape of its table and JSON output.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzyshrink"))
        .args(args)
        .env_remove("FUZZYSHRINK_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid JSON report")
}

fn temp_csv(name: &str, content: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("fuzzyshrink-cli-test-{name}.csv"));
    let mut f = std::fs::File::create(&path).expect("temp file");
    f.write_all(content.as_bytes()).expect("write temp csv");
    path
}

#[test]
fn fit_builtin_reports_a_model_table() {
    let out = run(&["fit", "--builtin", "dataset2"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(
        text.contains("coefficient"),
        "table names coefficients:\n{text}"
    );
    assert!(text.contains("dlr"), "table shows the metric:\n{text}");
}

#[test]
fn conflicting_sources_are_a_usage_error() {
    let out = run(&["fit", "--builtin", "dataset2", "--csv", "whatever.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_required_k_is_a_usage_error() {
    let out = run(&["shrink", "--builtin", "dataset2", "--fixture", "14a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_index_out_of_range_is_a_usage_error() {
    let out = run(&["demo", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreadable_csv_is_a_data_error() {
    let out = run(&["fit", "--csv", "/nonexistent/definitely-missing.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_csv_cell_is_a_data_error() {
    let path = temp_csv("malformed", "x1,y_m,y_s\n1,oops,2\n");
    let out = run(&["fit", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("row 1"), "error names the row: {err}");
    std::fs::remove_file(path).ok();
}

#[test]
fn singular_design_is_a_numerical_error() {
    // A constant input column makes the design rank deficient.
    let path = temp_csv("singular", "x1,y_m,y_s\n2,1,0.5\n2,2,0.5\n2,3,0.5\n");
    let out = run(&["fit", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_file(path).ok();
}

fn strip_timestamp(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.contains("timestamp_unix_seconds"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn json_reports_are_deterministic_and_thread_count_independent() {
    let args = [
        "sweep",
        "--builtin",
        "dataset2",
        "--fixture",
        "14a",
        "--output",
        "json",
    ];
    let first = run(&args);
    let second = run(&args);
    let single_threaded = run(&[
        "--threads",
        "1",
        "sweep",
        "--builtin",
        "dataset2",
        "--fixture",
        "14a",
        "--output",
        "json",
    ]);
    assert!(first.status.success());
    assert_eq!(
        strip_timestamp(&stdout(&first)),
        strip_timestamp(&stdout(&second))
    );
    assert_eq!(
        strip_timestamp(&stdout(&first)),
        strip_timestamp(&stdout(&single_threaded))
    );
}

#[test]
fn sweep_finds_the_published_optimum_for_study2() {
    let out = run(&[
        "sweep",
        "--builtin",
        "dataset2",
        "--fixture",
        "14a",
        "--output",
        "json",
    ]);
    assert!(out.status.success());
    let report = json(&out);
    let shrinkage = &report["shrinkage"];
    assert!((shrinkage["k_star"].as_f64().unwrap() - 0.0972).abs() < 0.005);
    assert!((shrinkage["boundary_sup"].as_f64().unwrap() - 0.2138).abs() < 0.01);
    assert_eq!(shrinkage["metric"], "dlr");
    assert_eq!(report["schema_version"], 1);
}

#[test]
fn evaluate_scores_the_printed_fitted_column() {
    let out = run(&[
        "evaluate",
        "--builtin",
        "dataset1",
        "--fixture",
        "13a-published-fitted",
        "--metric",
        "dlr",
        "--output",
        "json",
    ]);
    assert!(out.status.success());
    let report = json(&out);
    let dlr = report["metrics"]["dlr"]["aggregate"].as_f64().unwrap();
    assert!((dlr - 20.1521).abs() < 0.05, "got {dlr}");
}

#[test]
fn shrink_at_the_published_constant_zeroes_the_slope_spread() {
    let out = run(&[
        "shrink",
        "--builtin",
        "dataset2",
        "--fixture",
        "14a",
        "--k",
        "0.0972",
        "--output",
        "json",
    ]);
    assert!(out.status.success());
    let report = json(&out);
    let coeffs = report["shrunk_model"]["coefficients"].as_array().unwrap();
    let slope = &coeffs[1];
    assert!((slope["m"].as_f64().unwrap() - 1.6285556).abs() < 1e-6);
    assert_eq!(slope["l"].as_f64().unwrap(), 0.0);
    assert_eq!(slope["r"].as_f64().unwrap(), 0.0);
}

#[test]
fn demo_reports_its_scoring_mode() {
    for study in ["1", "2", "3", "4"] {
        let out = run(&["demo", study]);
        assert!(out.status.success(), "demo {study}");
        let text = stdout(&out);
        assert!(
            text.contains("scoring mode:"),
            "demo {study} names its mode:\n{text}"
        );
        assert!(
            text.contains("reported"),
            "demo {study} tabulates reported values:\n{text}"
        );
    }
}

#[test]
fn log_env_var_writes_progress_to_stderr() {
    let out = Command::new(env!("CARGO_BIN_EXE_fuzzyshrink"))
        .args(["fit", "--builtin", "dataset2"])
        .env("FUZZYSHRINK_LOG", "debug")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(!out.stderr.is_empty(), "debug logging emits to stderr");
}

#[test]
fn csv_output_round_trips_through_the_parser() {
    let out = run(&["fit", "--builtin", "dataset3", "--output", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed = fuzzyshrink::datasets::parse_csv(&text).expect("emitted CSV parses");
    assert_eq!(parsed.n(), 15);
    assert_eq!(parsed.p(), 3);
}
