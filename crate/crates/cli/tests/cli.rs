//! End-to-end tests of the `satsense` binary: flag handling, exit codes,
//! output schemas and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn satsense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satsense"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn assert_matches_schema(value: &serde_json::Value, schema_file: &str) {
    let schema_text = std::fs::read_to_string(schema_dir().join(schema_file))
        .unwrap_or_else(|e| panic!("cannot read {schema_file}: {e}"));
    let schema: serde_json::Value = serde_json::from_str(&schema_text).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(value)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(
        errors.is_empty(),
        "instance violates {schema_file}:\n{}",
        errors.join("\n")
    );
}

#[test]
fn eval_vacuum_has_zero_information() {
    let out = satsense(&[
        "eval", "--T", "2", "--n-sat", "1", "--delta-bar", "0", "--R", "0", "--theta", "0",
        "--r", "0", "--psi", "0", "--target", "od",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_matches_schema(&v, "eval.schema.json");
    assert_eq!(v["fisher"]["value"], 0.0);
    assert_eq!(v["v"], 1.0);
    assert_eq!(v["xi"], 1.0);
}

#[test]
fn eval_rejects_negative_squeeze_with_usage_exit() {
    let out = satsense(&["eval", "--T", "1", "--n-sat", "1", "--r", "-1", "--target", "od"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("r must be >= 0"), "stderr: {stderr}");
}

#[test]
fn eval_coherent_probe_has_no_variance_channel() {
    let out = satsense(&[
        "eval", "--T", "1", "--n-sat", "1", "--delta-bar", "1", "--R", "1", "--theta", "0.25",
        "--r", "0", "--psi", "0", "--target", "detuning",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_matches_schema(&v, "eval.schema.json");
    assert_eq!(v["fisher"]["var_term"], 0.0);
    assert!(v["fisher"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn optimize_reports_advantage_of_at_least_one() {
    let out = satsense(&["optimize", "--T", "1", "--n-sat", "1", "--target", "detuning"]);
    // the squeezed optimum may legitimately sit against a bound (exit 3);
    // the JSON is written either way
    assert!(matches!(out.status.code(), Some(0) | Some(3)));
    let v = stdout_json(&out);
    assert_matches_schema(&v, "advantage.schema.json");
    assert!(v["advantage"].as_f64().unwrap() >= 1.0 - 1e-6);
    let flagged = v["sq_result"]["boundary_flag"].as_bool().unwrap()
        || v["coh_result"]["boundary_flag"].as_bool().unwrap();
    assert_eq!(out.status.code() == Some(3), flagged);
}

#[test]
fn optimize_unsaturable_medium_exits_boundary() {
    let out = satsense(&["optimize", "--T", "1", "--n-sat", "1e12", "--target", "detuning"]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert!(
        v["sq_result"]["boundary_flag"].as_bool().unwrap()
            || v["coh_result"]["boundary_flag"].as_bool().unwrap()
    );
}

#[test]
fn optimize_large_depth_advantage_near_two() {
    let out = satsense(&["optimize", "--T", "100", "--n-sat", "1", "--target", "detuning"]);
    assert!(matches!(out.status.code(), Some(0) | Some(3)));
    let v = stdout_json(&out);
    let advantage = v["advantage"].as_f64().unwrap();
    assert!((1.5..=3.0).contains(&advantage), "advantage {advantage}");
}

#[test]
fn optimize_single_family_writes_result_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coh.json");
    let out = satsense(&[
        "optimize", "--T", "1", "--n-sat", "1", "--target", "detuning", "--family", "coherent",
        "--json-out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_matches_schema(&v, "optimization-result.schema.json");
    assert_eq!(v["family"], "coherent");
    assert_eq!(v["state"]["r"], 0.0);
    // human summary on stdout when the JSON goes to a file
    assert!(String::from_utf8_lossy(&out.stdout).contains("optimum"));
}

fn sweep_args<'a>(out_path: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec![
        "sweep",
        "--n-sat-min", "0.5", "--n-sat-max", "2", "--n-sat-points", "2",
        "--t-min", "0.5", "--t-max", "2", "--t-points", "2",
        "--target", "detuning", "--out", out_path,
    ];
    args.extend_from_slice(extra);
    args
}

#[test]
fn sweep_csv_layout_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let out = satsense(&sweep_args(a.to_str().unwrap(), &[]));
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&a).unwrap();
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(
        lines[0],
        "n_sat,T,target,I_coh,I_sq,advantage,R,theta,r,psi,delta_bar,nbar,regime,boundary_flag"
    );
    for line in &lines {
        assert_eq!(line.split(',').count(), 14);
    }

    // identical invocation, then a different thread cap: bodies must match
    let out = satsense(&sweep_args(b.to_str().unwrap(), &[]));
    assert!(out.status.success());
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let out = satsense(&sweep_args(b.to_str().unwrap(), &["--threads", "1"]));
    assert!(out.status.success());
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn sweep_json_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = satsense(&sweep_args(path.to_str().unwrap(), &["--format", "json"]));
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_matches_schema(&v, "sweep-table.schema.json");
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_rejects_bad_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = satsense(&[
        "sweep", "--n-sat-min", "-1", "--target", "detuning", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_location_hook_saturates_crb() {
    let out = satsense(&[
        "simulate", "--hook", "normal-location", "--target", "detuning", "--samples", "100",
        "--reps", "10000", "--seed", "7", "--bracket", "-1", "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_matches_schema(&v, "estimator-report.schema.json");
    let ratio = v["crb_ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "crb_ratio {ratio}");
}

#[test]
fn simulate_is_seed_deterministic() {
    let args = [
        "simulate", "--hook", "normal-location", "--target", "detuning", "--samples", "50",
        "--reps", "300", "--seed", "11", "--bracket", "-1", "1",
    ];
    let a = satsense(&args);
    let b = satsense(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn simulate_physical_model_at_a_working_point() {
    let out = satsense(&[
        "simulate", "--T", "1", "--n-sat", "1", "--delta-bar", "0", "--R", "1.272", "--theta",
        "1.5707963267948966", "--target", "detuning", "--samples", "100", "--reps", "2000",
        "--seed", "3", "--bracket", "-1.2", "1.2",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_matches_schema(&v, "estimator-report.schema.json");
    let ratio = v["crb_ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.15, "crb_ratio {ratio}");
}

#[test]
fn config_file_supplies_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("eval.json");
    std::fs::write(
        &config,
        r#"{"T": 2.0, "n-sat": 1.0, "delta-bar": 0.0, "R": 0.0, "theta": 0.0,
            "r": 0.0, "psi": 0.0, "target": "od"}"#,
    )
    .unwrap();
    let out = satsense(&["eval", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["fisher"]["value"], 0.0);

    // flags override file values: R = 1 gives nonzero information
    let out = satsense(&["eval", "--config", config.to_str().unwrap(), "--R", "1"]);
    assert!(out.status.success());
    assert!(stdout_json(&out)["fisher"]["value"].as_f64().unwrap() > 0.0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"T": 2.0, "n-sat": 1.0, "target": "od", "bogus": 1}"#).unwrap();
    let out = satsense(&["eval", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}
