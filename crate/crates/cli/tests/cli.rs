use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdense"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Report JSON with wall-clock fields removed.
fn stable(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    if let Some(trace) = v.get_mut("trace").and_then(Value::as_object_mut) {
        trace.remove("wall_ms");
    }
    v
}

/// Compares with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn golden_report(name: &str, args: &[&str]) -> Value {
    let v = stable(&run_ok(args));
    golden(name, &(serde_json::to_string_pretty(&v).unwrap() + "\n"));
    v
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn solve_k4_pendant() {
    let v = golden_report("solve_k4pendant.json", &["solve", &path("k4pendant.hgr")]);
    assert_eq!(v["result"]["density"], 1.5);
    assert_eq!(v["certificate"]["optimal"], true);
    assert_eq!(v["result"]["vertex_ids"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn decompose_k4_pendant() {
    let v = golden_report("decompose_k4pendant.json", &["decompose", &path("k4pendant.hgr")]);
    let factors = v["decomposition"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(factors[1]["vertex_ids"], serde_json::json!([4]));
}

#[test]
fn dm_path() {
    // The whole path has density 2/3 < 1, so everything lands in the minus part.
    let v = golden_report("dm_path3.json", &["dm", &path("path3.hgr")]);
    assert_eq!(v["dm"]["v_minus"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["dm"]["v_zero"], serde_json::json!([]));
}

#[test]
fn dm_rejects_weights() {
    let out = run(&["dm", &path("weighted.hgr")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_weighted() {
    let v = golden_report("oracle_weighted.json", &["oracle", &path("weighted.hgr")]);
    assert_eq!(v["oracle"]["densest"]["density"], 1.5);
}

#[test]
fn eigen_k4_pendant() {
    let v = stable(&run_ok(&["eigen", &path("k4pendant.hgr")]));
    let diff = v["eigen"]["difference"].as_f64().unwrap();
    assert!(diff.abs() < 1e-9);
}

#[test]
fn dual_output() {
    let text = run_ok(&["dual", &path("k4pendant.hgr")]);
    golden("dual_k4pendant.hgr", &text);
    let dir = tempfile::tempdir().unwrap();
    let dual = dir.path().join("dual.hgr");
    std::fs::write(&dual, &text).unwrap();
    let back = run_ok(&["dual", dual.to_str().unwrap()]);
    let original = hyperdense::io::parse_hypergraph(
        &std::fs::read_to_string(data("k4pendant.hgr")).unwrap(),
        false,
    )
    .unwrap();
    assert_eq!(back, hyperdense::io::serialize_hypergraph(&original.hypergraph));
}

#[test]
fn solve_writes_trace_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.jsonl");
    let matrix = dir.path().join("matrix.json");
    let v = stable(&run_ok(&[
        "solve",
        &path("k4pendant.hgr"),
        "--threads",
        "2",
        "--trace",
        trace.to_str().unwrap(),
        "--matrix",
        matrix.to_str().unwrap(),
    ]));
    let lines = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(lines.lines().count() as u64, v["trace"]["sweeps"].as_u64().unwrap() + 1);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&matrix).unwrap()).unwrap();
    assert_eq!(m["entries"].as_array().unwrap().len(), 14);
}

#[test]
fn parse_errors_are_json_on_stderr() {
    let out = run(&["solve", &path("empty_edge.hgr")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "parse");
    assert_eq!(err["error"]["line"], 3);

    let v = stable(&run_ok(&["solve", "--strip-degenerate", &path("empty_edge.hgr")]));
    assert_eq!(v["stripped"]["removed_edges"], serde_json::json!([1]));
    assert_eq!(v["result"]["exact_density"], serde_json::json!({"num": 2, "den": 3}));
}

#[test]
fn usage_errors_exit_2() {
    for args in [&["solve"][..], &["frobnicate"], &["solve", "x.hgr", "--threads", "0"]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "usage");
    }
    let out = run(&["solve", "/nonexistent/file.hgr"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generated_instances_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.hgr");
    let file = file.to_str().unwrap();
    for seed in 0..100 {
        let seed = seed.to_string();
        run_ok(&["gen", "--n", "10", "--m", "15", "--seed", &seed, "-o", file]);
        let v: Value = serde_json::from_str(&run_ok(&["verify", file])).unwrap();
        assert_eq!(v["verify"]["matches"], true, "seed {seed}");
    }
}

#[test]
fn gen_is_deterministic() {
    let a = run_ok(&["gen", "--n", "20", "--m", "30", "--seed", "7"]);
    let b = run_ok(&["gen", "--n", "20", "--m", "30", "--seed", "7"]);
    assert_eq!(a, b);
    let out = run(&["gen", "--n", "20", "--m", "2", "--max-size", "3"]);
    assert_eq!(out.status.code(), Some(1));
}
