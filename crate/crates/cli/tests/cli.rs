use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dirminor::generate::bidirected_complete;
use dirminor::io::write_digraph;
use serde_json::Value;
use tempfile::TempDir;

fn dirminor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirminor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn verify_file(path: &Path) -> Output {
    dirminor(&["verify", path.to_str().unwrap()])
}

#[test]
fn dichromatic_of_bidirected_k4() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "k4.txt", &write_digraph(&bidirected_complete(4)));
    let out = dirminor(&["dichromatic", &file]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["certificate"]["kind"], "dicoloring");
    assert_eq!(doc["certificate"]["payload"]["dichromatic_number"], 4);
}

#[test]
fn lower_bound_report() {
    let out = dirminor(&["lower-bound", "--t", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dichromatic_number"], 3);
    assert_eq!(v["butterfly_clique_free"], true);
    let four = json(&dirminor(&["lower-bound", "--t", "4"]));
    assert_eq!(four["dichromatic_number"], 4);
    assert!(four["butterfly_clique_free"].is_null());
}

#[test]
fn certificates_verify_in_a_new_process() {
    let dir = TempDir::new().unwrap();
    let k6 = write(&dir, "k6.txt", &write_digraph(&bidirected_complete(6)));
    let k8 = write(&dir, "k8.txt", &write_digraph(&bidirected_complete(8)));
    let c3 = write(&dir, "c3.txt", "3 3\n0 1\n1 2\n2 0\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["dichromatic", &k6],
        vec!["decompose", &k6],
        vec!["strong-minor", &k6, "--t", "3"],
        vec!["butterfly", &k8, "--t", "2"],
        vec!["subdivide", &k6, &c3],
    ];
    for (i, args) in runs.iter().enumerate() {
        let out = dirminor(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let cert = dir.path().join(format!("cert{i}.json"));
        fs::write(&cert, &out.stdout).unwrap();
        let check = verify_file(&cert);
        assert!(check.status.success(), "{args:?}");
        assert_eq!(json(&check)["verified"], true);
    }
}

#[test]
fn tampered_certificate_fails() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &write_digraph(&bidirected_complete(4)));
    let out = dirminor(&["dichromatic", &k4]);
    let mut doc = json(&out);
    doc["certificate"]["payload"]["dichromatic_number"] = 3.into();
    let cert = dir.path().join("bad.json");
    fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    let check = verify_file(&cert);
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(json(&check)["verified"], false);
}

#[test]
fn not_forced_exits_nonzero() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &write_digraph(&bidirected_complete(4)));
    let out = dirminor(&["strong-minor", &k4, "--t", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"], "not forced");
}

#[test]
fn malformed_input_reports_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "loop.txt", "2 1\n0 0\n");
    let out = dirminor(&["dichromatic", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    let missing = dirminor(&["dichromatic", "/nonexistent/file.txt"]);
    assert!(!missing.status.success());
    assert!(!dirminor(&["dichromatic", &bad, "--frobnicate"]).status.success());
}

#[test]
fn explore_exhaustive_finds_nothing_up_to_five() {
    let out = dirminor(&["explore", "--t", "3", "--max-n", "5", "--exhaustive"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"], "none found in range");
    assert_eq!(v["report"]["examined"], 1 + 3 + 16 + 218 + 9608);
}

#[test]
fn explore_is_reproducible() {
    let args = ["explore", "--t", "2", "--max-n", "7", "--seed", "11", "--samples", "30"];
    let a = Command::new(env!("CARGO_BIN_EXE_dirminor")).args(args).env("DIRMINOR_THREADS", "1").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_dirminor")).args(args).env("DIRMINOR_THREADS", "3").output().unwrap();
    assert!(a.status.success() && b.status.success());
    let (mut ja, mut jb) = (json(&a), json(&b));
    ja["report"]["config"]["threads"] = Value::Null;
    jb["report"]["config"]["threads"] = Value::Null;
    assert_eq!(ja, jb);
}

#[test]
fn dot_export() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &write_digraph(&bidirected_complete(4)));
    let dot = dir.path().join("out.dot");
    let out = dirminor(&["decompose", &k4, "--dot", dot.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("digraph G {"));
    assert!(text.contains("0 -> 1;"));
}
