//! End-to-end tests of the `upb` binary: generate/verify/certify/graph
//! pipelines, document round-trips, and exit-code contracts.

use std::path::Path;
use std::process::{Command, Output};

fn upb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generate(dir: &Path, name: &str, extra: &[&str], file: &str) -> String {
    let path = dir.join(file);
    let path_str = path.to_str().unwrap().to_owned();
    let mut args = vec!["generate", name, "--out", &path_str];
    args.extend_from_slice(extra);
    let out = upb(&args);
    assert_eq!(out.status.code(), Some(0), "generate {name}: {}", stderr(&out));
    path_str
}

#[test]
fn pyramid_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "pyramid", &[], "pyramid.json");

    let v = upb(&["verify", &path, "--exhaustive"]);
    assert_eq!(v.status.code(), Some(0));
    let text = stdout(&v);
    assert!(text.contains("32 assignments"), "{text}");
    assert!(text.contains("verdict: UPB"), "{text}");
    assert!(text.contains("met with equality"), "{text}");

    let c = upb(&["certify", &path]);
    assert_eq!(c.status.code(), Some(0));
    let text = stdout(&c);
    assert!(text.contains("certificate: UPB"), "{text}");
    assert!(text.contains("min eigenvalue"), "{text}");

    let dot_path = dir.path().join("pyramid.dot");
    let g = upb(&["graph", &path, "--dot", dot_path.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 10);
    assert!(dot.contains("label=\"0\"") && dot.contains("label=\"1\""));
}

#[test]
fn document_round_trip_preserves_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "tiles", &[], "tiles.json");
    let first = upb(&["verify", &path, "--exhaustive"]);
    // Re-serialize through a generic JSON parse and verify again.
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let copy = dir.path().join("tiles_copy.json");
    std::fs::write(&copy, serde_json::to_string(&value).unwrap()).unwrap();
    let second = upb(&["verify", copy.to_str().unwrap(), "--exhaustive"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn bad_parameters_exit_with_input_error() {
    let o = upb(&["generate", "gentiles2", "--m", "3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("does not form a UPB"), "{}", stderr(&o));

    let o = upb(&["generate", "no-such-family"]);
    assert_eq!(o.status.code(), Some(3));

    let o = upb(&["generate", "genshifts"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--k"), "{}", stderr(&o));
}

#[test]
fn malformed_and_invalid_documents() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = upb(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    // Two identical states: parses as a document but fails verification.
    let doc = serde_json::json!({
        "format_version": "1",
        "dims": [2, 2],
        "states": [
            [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
            [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
        ]
    });
    let nonorth = dir.path().join("nonorth.json");
    std::fs::write(&nonorth, doc.to_string()).unwrap();
    let o = upb(&["verify", nonorth.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("verification failed"), "{}", stderr(&o));
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "tiles", &[], "tiles.json");
    let o = upb(&["verify", &path, "--budget", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("budget exhausted"), "{}", stdout(&o));
}

#[test]
fn certify_range_deficit_and_completion() {
    let dir = tempfile::tempdir().unwrap();
    let plus = generate(dir.path(), "pyr34plus", &[], "pyr34plus.json");
    let o = upb(&["certify", &plus]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("RangeDeficit"), "{text}");
    assert!(text.contains("product span 4 < rank 6"), "{text}");

    let pyr34 = generate(dir.path(), "pyr34", &[], "pyr34.json");
    let o = upb(&["certify", &pyr34, "--extend", "3,5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("SeparableByCompletion"), "{text}");
    assert!(text.contains("15 states on dims [3, 5]"), "{text}");
}

#[test]
fn shifts_graph_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "shifts", &[], "shifts.json");
    let g = upb(&["graph", &path]);
    assert_eq!(g.status.code(), Some(0));
    let dot = stdout(&g);
    assert_eq!(dot.matches(" -- ").count(), 6);
    assert!(dot.contains("label=\"2\""));
}

#[test]
fn parameterized_generators() {
    let dir = tempfile::tempdir().unwrap();
    let q = generate(dir.path(), "quadres", &["--p", "13"], "q13.json");
    let o = upb(&["verify", &q, "--budget", "1000000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dims [7, 7]"), "{}", stdout(&o));

    let a = generate(dir.path(), "pyramid", &[], "a.json");
    let b = generate(dir.path(), "tiles", &[], "b.json");
    let t = dir.path().join("t.json");
    let o = upb(&[
        "generate",
        "tensor",
        "--left",
        &a,
        "--right",
        &b,
        "--out",
        t.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("25 states on dims [9, 9]"), "{}", stdout(&o));

    let gp = generate(
        dir.path(),
        "genpyramid",
        &["--parties", "3", "--offset", "2"],
        "gp.json",
    );
    let o = upb(&["verify", &gp, "--exhaustive", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2187 assignments"), "{}", stdout(&o));
}
