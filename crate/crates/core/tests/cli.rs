//! The binary end to end: exit codes, determinism and the spectrum cache.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fractal-traces"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cantor() -> String {
    data("cantor.json").display().to_string()
}

#[test]
fn dim_with_defaults() {
    let out = run(&["dim", "--spec", &cantor()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "dim");
    let d = v["selfsimilar"]["dimension"].as_f64().unwrap();
    assert!((d - 2f64.ln() / 3f64.ln()).abs() < 1e-9);
    let lac = v["abscissa"]["lacunary"]["estimate"].as_f64().unwrap();
    assert!((lac - 0.6309).abs() < 1e-2);
}

#[test]
fn negative_level_is_a_usage_error() {
    let out = run(&["dim", "--spec", &cantor(), "--level", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "usage");
}

#[test]
fn spec_and_gaps_conflict() {
    let out = run(&["dim", "--spec", &cantor(), "--gaps", "gaps.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_spec_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("overlap.json");
    std::fs::write(
        &path,
        r#"{"interval":[0,1],"generator":{"kind":"self_similar","maps":[{"lambda":0.6,"offset":0},{"lambda":0.6,"offset":0.4}]}}"#,
    )
    .unwrap();
    let out = run(&["validate", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "validation");
}

#[test]
fn missing_file_is_reported_as_json() {
    let out = run(&["dim", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].is_string());
}

#[test]
fn appendix_check_passes() {
    let out = run(&["check", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["appendix"]["pass"], true);
}

#[test]
fn reruns_are_byte_identical() {
    let spec = data("alternating.json").display().to_string();
    let args = ["indices", "--spec", &spec, "--level", "12"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["check", "--seed", "3", "--depth", "2000"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn warm_cache_matches_cold() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let spec = data("two_ratio.json").display().to_string();
    let args = [
        "--cache-dir",
        cache,
        "zeta",
        "--spec",
        &spec,
        "--level",
        "14",
        "--alpha",
        "1",
    ];
    let cold = run(&args);
    assert_eq!(cold.status.code(), Some(0));
    assert!(
        std::fs::read_dir(dir.path()).unwrap().next().is_some(),
        "cache stays empty"
    );
    let warm = run(&args);
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = run(&args[2..]);
    assert_eq!(cold.stdout, uncached.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dim.json");
    let out = run(&[
        "--out",
        path.to_str().unwrap(),
        "dim",
        "--spec",
        &cantor(),
        "--level",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "dim");
}
