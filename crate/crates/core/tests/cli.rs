use std::process::Command;

use serde_json::Value;
use tempora::cli::{main_with_args, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(std::iter::once("tempora").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn bound_reports_pentagon_value() {
    let (code, out, _) = run(&["bound", "builtin:ncycle5", "--method", "simplified", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let primal = v["primal"].as_f64().unwrap();
    assert!((primal - 5.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-6);
    assert!(v["dual"].as_f64().unwrap() >= primal - 1e-9);
    assert_eq!(v["method"], "simplified");
    assert_eq!(v["solver"], "ipm");
    assert!(v["converged"].as_bool().unwrap());
}

#[test]
fn bound_text_output_mentions_references() {
    let (code, out, _) = run(&["bound", "builtin:gyni"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("gyni"));
    assert!(out.contains("sequential"));
}

#[test]
fn classical_values() {
    let (code, out, _) = run(&["classical", "builtin:lg", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nchv"], 1.0);
    assert_eq!(v["algebraic"], 3.0);
}

#[test]
fn realize_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gyni.json");
    let p = path.to_str().unwrap();
    let (code, _, err) = run(&["realize", "builtin:gyni", "--out", p]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, _) = run(&["verify", p, "builtin:gyni", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);

    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    r["metadata"]["primal"] = Value::from(0.5);
    std::fs::write(&path, r.to_string()).unwrap();
    let (code, _, _) = run(&["verify", p, "builtin:gyni"]);
    assert_eq!(code, EXIT_NUMERICAL);
}

#[test]
fn simplified_realization_of_pentagon_is_a_qubit_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.json");
    let p = path.to_str().unwrap();
    let (code, _, err) = run(&["realize", "builtin:ncycle5", "--method", "simplified", "--out", p]);
    assert_eq!(code, EXIT_OK, "{err}");
    let r = tempora::QuantumRealization::load(&path).unwrap();
    assert_eq!(r.dimension, 2);
    let (code, _, _) = run(&["verify", p, "builtin:ncycle5"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn lg_region_csv() {
    let (code, out, _) = run(&["lg-region", "--grid", "5"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("q12,q13,q23,sheet"));
    for line in lines {
        let f: Vec<f64> = line.split(',').take(3).map(|x| x.parse().unwrap()).collect();
        let det = 1.0 + 2.0 * f[0] * f[1] * f[2] - f[0] * f[0] - f[1] * f[1] - f[2] * f[2];
        assert!(det.abs() < 1e-9);
    }
}

#[test]
fn ncycle_command() {
    let (code, out, _) = run(&["ncycle", "--n", "7", "--analytic", "--solve", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let exact = 7.0 * (std::f64::consts::PI / 7.0).cos();
    assert!((v["analytic"].as_f64().unwrap() - exact).abs() < 1e-12);
    assert!(v["difference"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["bound", "builtin:nope"]).0, EXIT_INPUT);
    assert_eq!(run(&["bound", "/no/such/file.json"]).0, EXIT_INPUT);
    assert_eq!(run(&["bound"]).0, EXIT_INPUT);
    assert_eq!(run(&["bound", "builtin:gyni", "--method", "simplified"]).0, EXIT_INPUT);
    assert_eq!(run(&["ncycle", "--n", "2", "--analytic"]).0, EXIT_INPUT);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "x", "settings": [{"id": 0, "outcomes": 2}], "sequence_length": 1,
        "objective": [{"kind": "correlator", "sequence": [3], "coeff": 1.0}]}"#)
        .unwrap();
    let (code, _, err) = run(&["bound", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(!err.is_empty());
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_tempora"))
        .args(["ncycle", "--n", "3", "--analytic"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("1.5"));
    let out = Command::new(env!("CARGO_BIN_EXE_tempora")).args(["bound", "builtin:nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
