//! End-to-end runs of the `maxflow` binary.

use std::path::Path;
use std::process::{Command, Output};

fn maxflow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxflow")).args(args).current_dir(dir).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn simulate_writes_rows_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--model", "mdep", "--m", "1", "--alpha", "1", "--n", "1000", "--seed", "7", "--out"];
    let first = maxflow(&[&args[..], &["a.csv"]].concat(), dir.path());
    let second = maxflow(&[&args[..], &["b.csv"]].concat(), dir.path());
    assert!(first.status.success() && second.status.success());
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read_to_string(dir.path().join("b.csv")).unwrap());
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 1001);
    assert_eq!(lines[0], "idx,x1,x2");
}

#[test]
fn maxima_then_metric_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(maxflow(&["simulate", "--model", "mdep", "--m", "2", "--n", "200", "--out", "ts.csv"], p).status.success());
    let out = maxflow(&["maxima", "--input", "ts.csv", "--a-n", "600", "--out", "f.csv"], p);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&maxflow(&["metric", "--kind", "weak-m1", "--a", "f.csv", "--b", "f.csv"], p));
    assert_eq!(v["value"], 0.0);
    let v = json(&maxflow(&["metric", "--kind", "uniform", "--a", "f.csv", "--b", "f.csv"], p));
    assert_eq!(v["value"], 0.0);
}

#[test]
fn extremal_cdf_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&maxflow(&["extremal", "cdf", "--alpha", "1", "--times", "0.5", "--thresholds", "2"], dir.path()));
    let p = v["value"].as_f64().unwrap();
    assert!((p - (-0.25f64).exp()).abs() < 1e-12);
}

#[test]
fn experiment_output_is_byte_identical_across_threads() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let run = |threads: &str, dir: &Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_maxflow"))
            .args(["experiment", "truncation-gap", "--n", "300", "--reps", "200", "--seed", "3", "--out-dir", "."])
            .current_dir(dir)
            .env("MAXFLOW_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut names: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        names.into_iter().map(|n| (n.clone(), std::fs::read(dir.join(n)).unwrap())).collect::<Vec<_>>()
    };
    let (one, four) = (run("1", a.path()), run("4", b.path()));
    assert!(one.len() >= 2);
    assert_eq!(one, four);
    let report: serde_json::Value = serde_json::from_slice(&one.iter().find(|(n, _)| n.to_string_lossy().ends_with(".json")).unwrap().1).unwrap();
    assert_eq!(report["schema"], "v1");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(maxflow(&["metric", "--kind", "nonsense", "--a", "x", "--b", "y"], p).status.code(), Some(2));
    assert_eq!(maxflow(&["frobnicate"], p).status.code(), Some(2));
    let missing = maxflow(&["metric", "--kind", "m1", "--a", "missing.csv", "--b", "missing.csv"], p);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
    assert_eq!(maxflow(&["--help"], p).status.code(), Some(0));
}

#[test]
fn help_documents_output_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let subs: [&[&str]; 8] = [
        &["simulate"],
        &["maxima"],
        &["metric"],
        &["estimate"],
        &["extremal", "sample"],
        &["extremal", "process"],
        &["extremal", "cdf"],
        &["experiment"],
    ];
    for sub in subs {
        let out = maxflow(&[sub, &["--help"]].concat(), dir.path());
        assert!(out.status.success());
        let text = String::from_utf8_lossy(&out.stdout).to_lowercase();
        assert!(text.contains("output"), "{sub:?} --help lacks an output section");
    }
}
