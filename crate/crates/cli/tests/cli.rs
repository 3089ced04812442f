use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use siframes::{parse_spec, CliError};

const HEIL_PSI: &str =
    r#"{"pieces": [{"lo": "1", "hi": "2", "amp": {"re": "1", "im": "0", "root": "1", "phase": "0"}, "mod": "0"}]}"#;

fn minimal(b: &str, psi: &str) -> String {
    format!(r#"{{"version": "1", "affine": {{"a": 2, "b": "{b}", "psi_hat": {psi}, "mode": "H2plus"}}}}"#)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_siframes"))
}

fn write_spec(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn minimal_spec_loads() {
    let s = parse_spec(&minimal("1", HEIL_PSI)).unwrap();
    assert_eq!(s.affine.a(), 2);
    assert!(s.probes.is_empty() && s.analysis.is_empty());
    assert!(s.digest.starts_with("sha256:"));
}

#[test]
fn nonpositive_step_is_a_schema_error() {
    match parse_spec(&minimal("0", HEIL_PSI)) {
        Err(CliError::Schema { field, .. }) => assert_eq!(field, "affine.b"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn conflicting_pieces_are_a_parse_error() {
    let psi = r#"{"pieces": [
        {"lo": "1", "hi": "2", "amp": {"re": "1", "im": "0", "root": "1", "phase": "0"}, "mod": "0"},
        {"lo": "3/2", "hi": "5/2", "amp": {"re": "2", "im": "0", "root": "1", "phase": "0"}, "mod": "0"}]}"#;
    match parse_spec(&minimal("1", psi)) {
        Err(CliError::Parse { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("overlapping"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn malformed_json_reports_position() {
    match parse_spec("{\"version\": \"1\",\n  \"affine\": [") {
        Err(CliError::Parse { line: 2, .. }) => {}
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_fields_and_versions_are_rejected() {
    let extra = minimal("1", HEIL_PSI).replacen('{', r#"{"colour": 1, "#, 1);
    assert!(matches!(parse_spec(&extra), Err(CliError::Schema { .. })));
    let v2 = minimal("1", HEIL_PSI).replace(r#""version": "1""#, r#""version": "2""#);
    match parse_spec(&v2) {
        Err(CliError::Schema { field, .. }) => assert_eq!(field, "version"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn demo_heil_passes() {
    let (code, out, _) = run(&["demo", "heil", "--a", "2", "--b", "1", "--c", "1"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    let blocks = r["blocks"].as_array().unwrap();
    let names: Vec<&str> = blocks.iter().map(|b| b["command"].as_str().unwrap()).collect();
    assert_eq!(names, ["parseval-check", "independence", "invariance"]);
    assert!(blocks.iter().all(|b| b["pass"] == Value::Bool(true)));
    assert_eq!(blocks[0]["result"]["probes"].as_array().unwrap().len(), 10);
}

#[test]
fn demo_heil_rejects_impossible_tiles() {
    let (code, _, err) = run(&["demo", "heil", "--a", "3", "--b", "1", "--c", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("no tile"), "{err}");
}

#[test]
fn demo_bownik_speegle_passes() {
    let (code, out, _) = run(&["demo", "bownik-speegle", "--epsilon", "1/4"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["exact"], Value::Bool(true));
    let (code, _, _) = run(&["demo", "bownik-speegle", "--epsilon", "3/2"]);
    assert_eq!(code, 2);
}

#[test]
fn overlapping_scales_fail_the_parseval_check() {
    let dir = tempfile::tempdir().unwrap();
    let psi = HEIL_PSI.replace(r#""hi": "2""#, r#""hi": "3""#);
    let p = write_spec(&dir, "wide.json", &minimal("1", &psi));
    let (code, out, _) = run(&["parseval-check", "--spec", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["blocks"][0]["result"]["calderon"]["pass"], Value::Bool(false));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["parseval-check", "--spec", "/nonexistent/spec.json"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(&dir, "min.json", &minimal("1", HEIL_PSI));
    // nothing to analyze
    assert_eq!(run(&["analyze", "--spec", p.to_str().unwrap()]).0, 2);
    assert_eq!(
        run(&["independence", "--spec", p.to_str().unwrap(), "--window", "3:1,0:0"]).0,
        2
    );
    assert_eq!(
        run(&["independence", "--spec", p.to_str().unwrap(), "--max-size", "9"]).0,
        2
    );
}

#[test]
fn csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(&dir, "min.json", &minimal("1", HEIL_PSI));
    let (code, out, _) = run(&[
        "dimension-function",
        "--spec",
        p.to_str().unwrap(),
        "--depth",
        "1",
        "--csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "lo,hi,dim\n0,1/2,1\n");
    let (code, out, _) = run(&[
        "independence",
        "--spec",
        p.to_str().unwrap(),
        "--window",
        "0:0,0:2",
        "--max-size",
        "2",
        "--csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 6);
    let (code, _, _) = run(&["parseval-check", "--spec", p.to_str().unwrap(), "--csv"]);
    assert_eq!(code, 2);
}

#[test]
fn analyze_runs_blocks_in_order_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = minimal("1", HEIL_PSI).replacen(
        '{',
        r#"{"analysis": [{"command": "parseval-check"}, {"command": "invariance", "shift": "1", "expect": true}, {"command": "dilation-check", "depth": 1}], "#,
        1,
    );
    let p = write_spec(&dir, "spec.json", &spec);
    let out = dir.path().join("report.json");
    let (code, stdout, _) = run(&["analyze", "--spec", p.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let names: Vec<&str> = r["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["command"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["parseval-check", "invariance", "dilation-check"]);
    assert_eq!(r["blocks"][2]["result"]["dilation_fixed"], Value::Bool(false));
}

#[test]
fn timings_only_on_request() {
    let (_, out, _) = run(&["demo", "bownik-speegle"]);
    assert!(!out.contains("elapsed_ms"));
    let (_, out, _) = run(&["demo", "bownik-speegle", "--timings"]);
    assert!(out.contains("elapsed_ms"));
}
