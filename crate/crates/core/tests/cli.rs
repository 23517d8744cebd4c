//! End-to-end runs of the `epsdens` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const PURE_POWERS: &str = r#"{"vars": ["X", "Y", "Z"], "gens": ["X", "Y^2", "Z^3"]}"#;
const EDGE: &str = r#"{"vars": ["X", "Y", "Z"], "gens": ["X*Y", "Y*Z", "Z*X"]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_epsdens"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], input: &Path) -> Output {
    let mut c = bin();
    c.args(args).arg("-i").arg(input);
    c.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn epsilon_of_edge_ideal() {
    let d = TempDir::new().unwrap();
    let out = run(&["epsilon"], &write(&d, "edge.json", EDGE));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["epsilon"], "1/2");
}

#[test]
fn ordinary_density_breakpoints() {
    let d = TempDir::new().unwrap();
    let out = run(&["density", "--verify"], &write(&d, "p.json", PURE_POWERS));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let bps: Vec<&str> = v["density"]["breakpoints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["value"].as_str().unwrap())
        .collect();
    assert_eq!(bps, ["1", "2", "3"]);
}

#[test]
fn sample_rows() {
    let d = TempDir::new().unwrap();
    let out = run(
        &["sample", "--step", "1/10", "--to", "4"],
        &write(&d, "p.json", PURE_POWERS),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f_exact,f_approx12"));
    assert!(text.lines().any(|l| l == "3,27,27.0000000000"), "{text}");
    assert_eq!(text.lines().count(), 42);
}

#[test]
fn csv_side_output() {
    let d = TempDir::new().unwrap();
    let csv = d.path().join("s.csv");
    let out = bin()
        .args(["density", "-i"])
        .arg(write(&d, "p.json", PURE_POWERS))
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("x,f_exact,f_approx12\n0,0,0\n"));
}

#[test]
fn output_file() {
    let d = TempDir::new().unwrap();
    let o = d.path().join("out.json");
    let out = bin()
        .args(["mixed", "-i"])
        .arg(write(&d, "p.json", PURE_POWERS))
        .arg("-o")
        .arg(&o)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(o).unwrap()).unwrap();
    assert!(v.get("job").is_some());
}

#[test]
fn diagonal_multiplicity() {
    let d = TempDir::new().unwrap();
    let out = run(&["diag", "--at", "5", "2"], &write(&d, "p.json", PURE_POWERS));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["multiplicity"], "24");
}

#[test]
fn partition_function_point() {
    let out = bin()
        .args(["vpf", "-m", r#"{"r": 1, "columns": [[1, 1]]}"#, "--at", "3", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1");
}

#[test]
fn closure_check() {
    let d = TempDir::new().unwrap();
    let out = run(
        &["check-closure"],
        &write(&d, "sq.json", r#"{"vars": ["X", "Y"], "gens": ["X^2", "Y^2"]}"#),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["closure"], serde_json::json!(["X^2", "X*Y", "Y^2"]));
}

#[test]
fn input_errors_exit_one_with_position() {
    let d = TempDir::new().unwrap();
    let out = run(
        &["density"],
        &write(&d, "bad.json", "{\"vars\":\n  [\"X\"], \"gens\": 3}"),
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"], "parse");
    assert_eq!(v["line"], 2);
    assert!(v["column"].as_u64().unwrap() > 0);

    let out = run(
        &["density"],
        &write(&d, "var.json", r#"{"vars": ["X"], "gens": ["Q"]}"#),
    );
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["density"], &d.path().join("missing.json"));
    assert_eq!(out.status.code(), Some(1));

    let out = bin().args(["density"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fit_failure_exits_two() {
    let d = TempDir::new().unwrap();
    let out = run(&["density", "--degree", "1"], &write(&d, "p.json", PURE_POWERS));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "fit_failure");
    assert!(v["diagnostics"].as_str().unwrap().contains("oracle"));
}

#[test]
fn thread_count_does_not_change_output() {
    let d = TempDir::new().unwrap();
    let input = write(&d, "edge.json", EDGE);
    let runs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|t| {
            let out = bin()
                .args(["invariants", "-i"])
                .arg(&input)
                .env("EPSDENS_THREADS", t)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0));
            out.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}
