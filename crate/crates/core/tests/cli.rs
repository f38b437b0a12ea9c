use std::process::{Command, Output};

use serde_json::Value;

fn sasaki7(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sasaki7"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn strip_elapsed(mut v: Value) -> Value {
    for r in v["results"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("elapsed_ms");
    }
    v
}

#[test]
fn verify_json_report_schema_and_exit_code() {
    let out = sasaki7(&["verify", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let results = report["results"].as_array().unwrap();
    assert!(results.len() >= 40);
    assert_eq!(report["summary"]["pass"], results.len());
    assert_eq!(report["summary"]["fail"], 0);
    assert_eq!(report["config"]["mode"], "exact");
    for key in [
        "id",
        "statement",
        "section",
        "status",
        "residual",
        "exact_zero",
        "elapsed_ms",
    ] {
        assert!(results[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_is_deterministic_modulo_elapsed() {
    let args = ["verify", "--sections", "3,5", "--format", "json"];
    let (a, b) = (json(&sasaki7(&args)), json(&sasaki7(&args)));
    assert_eq!(strip_elapsed(a), strip_elapsed(b));
}

#[test]
fn float_mode_at_nearly_parallel_point() {
    let out = sasaki7(&[
        "verify",
        "--mode",
        "float",
        "--t",
        "1/5",
        "--tol",
        "1e-9",
        "--sections",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn configuration_errors_exit_with_2() {
    let out = sasaki7(&["verify", "--t", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("t must be positive"));
    assert_eq!(sasaki7(&["verify", "--sections", "8"]).status.code(), Some(2));
    assert_eq!(sasaki7(&["verify", "--mode", "fuzzy"]).status.code(), Some(2));
    assert_eq!(
        sasaki7(&["sweep", "--t-from", "1", "--t-to", "1/2", "--steps", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sasaki7(&["dump", "--object", "curvature"]).status.code(), Some(2));
}

#[test]
fn sweep_csv_contains_round_row() {
    let out = sasaki7(&["sweep", "--t-from", "1/2", "--t-to", "1", "--steps", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("1,1,42,6,6,0,-16,4.5,20.25"), "{last}");
}

#[test]
fn dump_then_ingest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.json");
    let out = sasaki7(&["dump", "--object", "coset"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, &out.stdout).unwrap();
    let ingested = sasaki7(&["ingest", path.to_str().unwrap()]);
    assert_eq!(ingested.status.code(), Some(0));
    assert_eq!(json(&ingested)["valid"], true);
}

#[test]
fn ingest_reports_broken_jacobi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    // [X1, X2] = X3 and [X1, X3] = X1: the Jacobi sum on (X1, X2, X3) is X3
    std::fs::write(
        &path,
        r#"{"basis":["X1","X2","X3"],"brackets":[[0,1,[[2,"1"]]],[0,2,[[0,"1"]]]],
            "h_indices":[],"metric_weights":["1","1","1"],"orientation":1}"#,
    )
    .unwrap();
    let out = sasaki7(&["ingest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("jacobi"));
    assert_eq!(sasaki7(&["ingest", "/nonexistent.json"]).status.code(), Some(2));
}
