//! End-to-end runs of the `scdforge` binary, pinning the exit-code contract:
//! 0 = success with verification, 1 = verification failure, 2 = usage error,
//! 3 = precondition or condition-check failure.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scdforge"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("scdforge-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn discretize_then_oracle_verify() {
    let out = tmp("l3n4.json");
    let status = bin()
        .args(["--out", out.to_str().unwrap(), "discretize", "--entry", "L3", "--n", "4"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let status = bin()
        .args(["oracle", "verify", "--chains", out.to_str().unwrap(), "--entry", "L3"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    std::fs::remove_file(out).unwrap();
}

#[test]
fn check_l5_reports_failures_with_exit_3() {
    let output = bin().args(["check", "--entry", "L5"]).output().unwrap();
    assert_eq!(output.status.code(), Some(3));
    let table = String::from_utf8_lossy(&output.stdout);
    assert!(table.contains("NO"), "failing rows are marked: {table}");
}

#[test]
fn check_l3_passes_with_exit_0() {
    let output = bin().args(["check", "--entry", "L3"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn mixed_kinds_product_exits_3() {
    let output = bin()
        .args(["product", "--a", "squareBoundary", "--b", "segment", "--mode", "geo"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stderr).contains("mixed"));
}

#[test]
fn usage_errors_exit_2() {
    let status = bin().args(["discretize", "--entry"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = bin().args(["discretize", "--entry", "nope", "--n", "2"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = bin().args(["frobnicate"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn pt_requires_t_at_least_one() {
    let status = bin().args(["check", "--entry", "Pt", "--t", "1/2"]).status().unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn stats_and_render_and_csv() {
    let output = bin().args(["stats", "--entry", "L3", "--lambda", "1"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("volume(P) = 1/6"));
    assert!(text.contains("matches volume"));

    let output = bin().args(["render", "--entry", "L2"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).starts_with("<?xml"));

    let output = bin()
        .args(["--format", "csv", "discretize", "--entry", "L2", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let csv = String::from_utf8_lossy(&output.stdout);
    assert!(csv.starts_with("chain_id,kind,scaled_rank,num_1,num_2,denominator"));

    let status = bin().args(["cover", "--entry", "L5", "--k", "1"]).status().unwrap();
    assert_eq!(status.code(), Some(0));

    let status = bin().args(["catalog", "list"]).status().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn cone_from_exported_base() {
    let base = tmp("projL2.json");
    let status = bin()
        .args(["--out", base.to_str().unwrap(), "catalog", "export", "--entry", "projL2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let output = bin()
        .args(["cone", "--base", base.to_str().unwrap(), "--apex", "1/2,1/2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("snakes"));
    std::fs::remove_file(base).unwrap();
}

#[test]
fn asym_runs_and_reports() {
    let output = bin().args(["asym", "--entry", "Pt", "--k", "4", "--t", "2"]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stderr).contains("loss"));
}
