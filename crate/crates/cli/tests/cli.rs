//! End-to-end tests running the compiled binary.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starlike-sis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is utf8")
}

fn json_ok(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout_ok(args)).expect("stdout parses as json")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("process exited")
}

fn as_f64(v: &serde_json::Value) -> f64 {
    v.as_f64().expect("json number")
}

#[test]
fn threshold_star_json() {
    let doc = json_ok(&["threshold", "--a", "0.5", "--b", "0.6", "--n", "4"]);
    assert_eq!(doc["schema"], "starlike-sis/1");
    assert!((as_f64(&doc["threshold"]) - 0.25).abs() < 1e-15);
    assert_eq!(doc["regime"], "Supercritical");
}

#[test]
fn threshold_two_level_counts_match_flat_star() {
    // one ring of 2 carrying 2 leaves each has the same threshold as 4 spokes
    let tree = json_ok(&["threshold", "--a", "0.5", "--b", "0.1", "--counts", "2,2"]);
    let star = json_ok(&["threshold", "--a", "0.5", "--b", "0.1", "--n", "4"]);
    assert_eq!(tree["threshold"], star["threshold"]);
    assert_eq!(tree["regime"], "Subcritical");
}

#[test]
fn threshold_deep_counts_is_located_numerically() {
    let doc = json_ok(&["threshold", "--a", "0.5", "--b", "0.3", "--counts", "2,2,2"]);
    let t = as_f64(&doc["threshold"]);
    assert!(t > 0.21 && t < 0.23, "threshold = {t}");
    assert_eq!(doc["regime"], "Supercritical");
}

#[test]
fn threshold_csv_columns() {
    let text = stdout_ok(&[
        "threshold",
        "--a",
        "0.3",
        "--b",
        "0.2",
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("threshold,regime"));
    let row = lines.next().expect("data row");
    assert!(row.ends_with(",Subcritical"), "row = {row}");
    assert_eq!(lines.next(), None);
}

#[test]
fn fixed_point_agrees_with_iterate() {
    let fp = json_ok(&["fixed-point", "--a", "0.5", "--b", "0.6", "--n", "4"]);
    let it = json_ok(&["iterate", "--a", "0.5", "--b", "0.6", "--n", "4"]);
    assert_eq!(fp["regime"], "Supercritical");
    assert_eq!(it["limit_kind"], "Nontrivial");
    let x_f = as_f64(&fp["nontrivial"][0]);
    let y_f = as_f64(&fp["nontrivial"][1]);
    assert!((as_f64(&it["final"][0]) - x_f).abs() < 1e-8);
    assert!((as_f64(&it["final"][1]) - y_f).abs() < 1e-8);
    assert!(as_f64(&fp["residual"]) <= 1e-10);
}

#[test]
fn fixed_point_subcritical_csv_has_empty_cells() {
    let text = stdout_ok(&[
        "fixed-point",
        "--a",
        "0.3",
        "--b",
        "0.2",
        "--n",
        "3",
        "--format",
        "csv",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("regime,residual,x_f,y_f"));
    let row = lines.next().expect("data row");
    assert!(row.starts_with("Subcritical,"));
    assert!(row.ends_with(",,"), "row = {row}");
}

#[test]
fn fixed_point_scalar_closed_forms() {
    let doc = json_ok(&["fixed-point", "--a", "0.6", "--b", "0.8", "--scalar"]);
    assert!((as_f64(&doc["x_f"]) - 5.0 / 6.0).abs() < 1e-12);
    assert!((as_f64(&doc["x_c"]) - 5.0 / 12.0).abs() < 1e-12);
    assert!((as_f64(&doc["f_prime_at_0"]) - 1.4).abs() < 1e-12);
    // subcritical scalar pair reports no interior point
    let sub = json_ok(&["fixed-point", "--a", "0.3", "--b", "0.3", "--scalar"]);
    assert!(sub["x_f"].is_null());
    assert!(sub["x_c"].is_null());
}

#[test]
fn fixed_point_multilevel_reports_per_level_values() {
    let doc = json_ok(&["fixed-point", "--a", "0.5", "--b", "0.4", "--counts", "2,2"]);
    assert_eq!(doc["regime"], "Supercritical");
    let levels = doc["nontrivial"].as_array().expect("array");
    assert_eq!(levels.len(), 3);
    // infection decays with depth from the hub
    assert!(as_f64(&levels[1]) > as_f64(&levels[2]));
    assert!(as_f64(&doc["residual"]) <= 1e-9);
}

#[test]
fn iterate_trace_emits_full_trajectory() {
    let summary = json_ok(&[
        "iterate",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--start",
        "0.01,0.02",
    ]);
    let iterations = summary["iterations"].as_u64().expect("count");
    let text = stdout_ok(&[
        "iterate",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--start",
        "0.01,0.02",
        "--trace",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,y");
    assert_eq!(lines.len() as u64, iterations + 2); // header + start + each step
    assert!(lines[1].starts_with("0,1.0000000000000000e-2,2.0000000000000000e-2"));
}

#[test]
fn iterate_multilevel_trace_has_one_column_per_level() {
    let text = stdout_ok(&[
        "iterate", "--a", "0.5", "--b", "0.4", "--counts", "2,2", "--trace",
    ]);
    assert_eq!(text.lines().next(), Some("t,s1,s2,s3"));
}

#[test]
fn iterate_scalar_reaches_the_closed_form_point() {
    let doc = json_ok(&["iterate", "--a", "0.6", "--b", "0.8", "--scalar"]);
    assert_eq!(doc["limit_kind"], "Nontrivial");
    assert!((as_f64(&doc["final"]) - 5.0 / 6.0).abs() < 1e-8);
}

#[test]
fn iterate_budget_exhaustion_is_unresolved_not_an_error() {
    let out = run(&[
        "iterate",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--max-iters",
        "3",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout parses as json");
    assert_eq!(doc["limit_kind"], "Unresolved");
    assert!(doc["converged_to"].is_null());
}

#[test]
fn sweep_line_rows_and_byte_determinism() {
    let args = ["sweep", "--line-m", "1.2357", "--steps", "40"];
    let first = stdout_ok(&args);
    let second = stdout_ok(&args);
    assert_eq!(first, second, "identical invocations must not drift");
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "a,b,n,regime,x_f,y_f,lambda1");
    assert_eq!(lines.len(), 41);
    for row in &lines[1..] {
        assert!(row.contains(",Supercritical,"), "row = {row}");
    }
}

#[test]
fn sweep_grid_leaves_subcritical_cells_empty() {
    let text = stdout_ok(&["sweep", "--grid", "--steps", "3", "--n", "2"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10); // header + 3x3 cells
    let sub: Vec<&&str> = lines[1..]
        .iter()
        .filter(|r| r.contains("Subcritical"))
        .collect();
    assert!(!sub.is_empty());
    for row in sub {
        assert!(row.ends_with(",,,"), "row = {row}");
    }
}

#[test]
fn sweep_json_wraps_records() {
    let doc = json_ok(&[
        "sweep", "--line-m", "1.2357", "--steps", "5", "--format", "json",
    ]);
    assert_eq!(doc["schema"], "starlike-sis/1");
    let records = doc["records"].as_array().expect("records array");
    assert_eq!(records.len(), 5);
    assert!(as_f64(&records[0]["lambda1"]) < 1.0);
}

#[test]
fn sweep_without_domain_is_a_usage_error() {
    assert_eq!(exit_code(&["sweep", "--steps", "10"]), 2);
    assert_eq!(exit_code(&["sweep", "--grid"]), 2); // missing --steps
}

#[test]
fn validate_star_passes_and_reports_both_checks() {
    let doc = json_ok(&["validate", "--a", "0.5", "--b", "0.6", "--n", "4"]);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["reduction_pass"], true);
    assert_eq!(doc["spread_pass"], true);
    assert_eq!(as_f64(&doc["reduction_max_discrepancy"]), 0.0);
    assert!(as_f64(&doc["spread_max_ratio_error"]) < 1e-10);
}

#[test]
fn validate_is_seed_deterministic() {
    let args = [
        "validate", "--a", "0.4", "--b", "0.5", "--n", "3", "--seed", "7",
    ];
    assert_eq!(stdout_ok(&args), stdout_ok(&args));
}

#[test]
fn validate_corrupted_map_fails_with_exit_one() {
    let out = run(&[
        "validate",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--corrupt",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("report still emitted");
    assert_eq!(doc["pass"], false);
    assert!(as_f64(&doc["reduction_max_discrepancy"]) > 1e-10);
}

#[test]
fn validate_multilevel_reduction() {
    let doc = json_ok(&["validate", "--a", "0.5", "--b", "0.4", "--counts", "3,2"]);
    assert_eq!(doc["pass"], true);
    assert_eq!(as_f64(&doc["reduction_max_discrepancy"]), 0.0);
    assert!(doc.get("spread_pass").is_none());
}

#[test]
fn classify_points_across_the_curves() {
    let origin = json_ok(&[
        "classify", "--a", "0.5", "--b", "0.6", "--n", "4", "--start", "0,0",
    ]);
    assert_eq!(origin["region"], "Origin");
    let low = json_ok(&[
        "classify",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--start",
        "0.01,0.01",
    ]);
    assert_eq!(low["region"], "I");
    let high = json_ok(&[
        "classify",
        "--a",
        "0.1",
        "--b",
        "0.7",
        "--n",
        "4",
        "--start",
        "0.995,0.95",
    ]);
    assert_eq!(high["region"], "III");
}

#[test]
fn classify_flip_tallies_every_sample() {
    let doc = json_ok(&[
        "classify",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--flip",
        "--samples",
        "400",
    ]);
    assert_eq!(doc["schema"], "starlike-sis/1");
    let ii = &doc["from_ii"];
    let total: u64 = ["to_i", "to_ii", "to_iii", "to_iv", "to_boundary"]
        .iter()
        .map(|k| ii[*k].as_u64().expect("tally"))
        .sum();
    assert_eq!(total, 400);
    assert!(doc["label"] == "Flipping" || doc["label"] == "NonFlipping");
}

#[test]
fn classify_flip_rejects_subcritical_parameters() {
    assert_eq!(
        exit_code(&["classify", "--a", "0.3", "--b", "0.1", "--n", "4", "--flip"]),
        2
    );
}

#[test]
fn missing_parameters_exit_two() {
    assert_eq!(exit_code(&["threshold", "--a", "0.5"]), 2);
    assert_eq!(exit_code(&["fixed-point", "--a", "0.5", "--b", "0.6"]), 2);
    assert_eq!(
        exit_code(&["threshold", "--a", "1.5", "--b", "0.6", "--n", "2"]),
        2
    );
    // start arity is checked against the topology
    assert_eq!(
        exit_code(&[
            "iterate",
            "--a",
            "0.5",
            "--b",
            "0.6",
            "--n",
            "4",
            "--start",
            "0.1,0.2,0.3",
        ]),
        2
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let mut file = tempfile::NamedTempFile::new().expect("temp config");
    write!(file, r#"{{"a": 0.5, "b": 0.6, "n": 4, "format": "csv"}}"#).expect("write config");
    let path = file.path().to_str().expect("utf8 path");

    let text = stdout_ok(&["threshold", "--config", path]);
    assert_eq!(text.lines().next(), Some("threshold,regime"));
    assert!(text.contains("Supercritical"));

    // an explicit flag overrides the file value
    let text = stdout_ok(&["threshold", "--config", path, "--b", "0.2"]);
    assert!(text.contains("Subcritical"));
}

#[test]
fn config_file_rejects_unknown_keys() {
    let mut file = tempfile::NamedTempFile::new().expect("temp config");
    write!(file, r#"{{"alpha": 0.5}}"#).expect("write config");
    let path = file.path().to_str().expect("utf8 path");
    assert_eq!(exit_code(&["threshold", "--config", path]), 2);
}

#[test]
fn output_flag_writes_the_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("report.json");
    let path_str = path.to_str().expect("utf8 path");
    let out = run(&[
        "fixed-point",
        "--a",
        "0.5",
        "--b",
        "0.6",
        "--n",
        "4",
        "--output",
        path_str,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).expect("file written");
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["schema"], "starlike-sis/1");
}
