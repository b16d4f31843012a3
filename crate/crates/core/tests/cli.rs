use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kernel-forge"))
        .args(args)
        .env_remove("KERNEL_FORGE_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn brownian_gram_on_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.csv");
    fs::write(&pts, "real-line\n1\n2\n3\n").unwrap();
    let o = run(&["gram", "--kernel", "brownian-min", "--points", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1,1,1\n1,2,2\n1,2,3\n");

    let o = run(&[
        "gram",
        "--kernel",
        "brownian-min",
        "--points",
        pts.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["schema"], "kernel-forge/1");
    assert_eq!(report["command"], "gram");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = run(&["gram", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn malformed_points_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.csv");
    fs::write(&pts, "nowhere\n1\n").unwrap();
    let o = run(&["gram", "--kernel", "brownian-min", "--points", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn indefinite_matrix_exits_with_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    fs::write(&m, "1,2\n2,1\n").unwrap();
    let o = run(&["chol", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive definite"));
}

#[test]
fn simulation_output_is_reproducible() {
    let args = ["simulate", "--example", "ex1", "--paths", "1000", "--resolution", "10", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# kernel-forge/1 simulate seed=7"));
    assert!(lines.next().unwrap().starts_with("path,V(0.1)"));
    assert_eq!(lines.count(), 1000);

    let other = run(&["simulate", "--example", "ex1", "--paths", "1000", "--resolution", "10", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn mismatched_duality_reports_failure() {
    let o = run(&["duality", "--example", "mismatched", "--paths", "2000", "--resolution", "8"]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["metrics"]["pass"], false);
}

#[test]
fn comma_separated_interval() {
    let o = run(&["qvar", "--interval", "0,0.5", "--resolutions", "4,6", "--paths", "500"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["metrics"]["mass"], 0.5);

    let o = run(&["qvar", "--interval", "0,0.5,1", "--paths", "5"]);
    assert_eq!(o.status.code(), Some(2));
}
