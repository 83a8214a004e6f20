use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn quiver(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "quivers", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallcrest")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn catalog_a2() {
    let o = run(&["catalog", "--quiver", &quiver("a2.qv"), "--primes", "2,3,5", "--dim-bound", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let labels: Vec<&str> = v["catalog"]["classes"].as_array().unwrap().iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["M11", "S1", "S2"]);
}

#[test]
fn catalog_zero_bound() {
    let o = run(&["catalog", "--quiver", &quiver("a2.qv"), "--dim-bound", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["catalog"]["classes"].as_array().unwrap().is_empty());
}

#[test]
fn products() {
    let o = run(&["product", "--quiver", &quiver("a2.qv"), "S2", "S1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["product"], serde_json::json!({"M11": 1, "S1+S2": 1}));
    assert_eq!(v["certificates"]["M11"]["polynomial"], "1");

    let o = run(&["product", "--quiver", &quiver("a2.qv"), "0", "M11"]);
    assert_eq!(json(&o)["product"], serde_json::json!({"M11": 1}));

    let o = run(&["product", "--quiver", &quiver("loop2.qv"), "S1", "S1"]);
    assert_eq!(json(&o)["product"], serde_json::json!({"2S1": 2, "M2": 1}));
}

#[test]
fn chi_and_ext() {
    let o = run(&["chi", "--quiver", &quiver("point.qv"), "--classes", "S1,S1", "--of", "2S1"]);
    let v = json(&o);
    assert_eq!(v["result"]["value"], 2);
    assert_eq!(v["result"]["polynomial"], "q + 1");
    let o = run(&["ext", "--quiver", &quiver("a2.qv"), "S1", "S2", "--middle", "M11"]);
    assert_eq!(json(&o)["result"]["value"], 0);
}

#[test]
fn verify_all_a2_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = run(&["verify", "--suite", "all", "--quiver", &quiver("a2.qv"), "--dim-bound", "2,2", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["suites"].as_array().unwrap().len(), 10);
}

#[test]
fn green_classical_refused_on_loop() {
    let o = run(&["verify", "--suite", "green-classical", "--quiver", &quiver("loop2.qv")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["status"], "refused");
}

#[test]
fn green_degen_loop() {
    let o = run(&["verify", "--suite", "green-degen", "--quiver", &quiver("loop2.qv"), "--dim-bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors() {
    let o = run(&["product", "--quiver", &quiver("a2.qv"), "S9", "S1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["catalog", "--quiver", "/nonexistent.qv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["catalog", "--quiver", &quiver("a2.qv"), "--dim-bound", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["catalog", "--quiver", &quiver("a2.qv"), "--primes", "2,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_csv() {
    let o = run(&["constants", "--quiver", &quiver("a2.qv"), "--dim-bound", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "A,B,C,coefficient\nS1,S2,M11,-1\nS2,S1,M11,1\n");
}
