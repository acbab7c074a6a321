use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weil2-cli-{}-{}", std::process::id(), name));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_weil2")).args(args).status().unwrap().code().unwrap()
}

fn spec_file(dir: &std::path::Path, text: &str) -> String {
    let p = dir.join("spec.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn read(p: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn lfunction_gauss_case_is_deterministic() {
    let dir = scratch("gauss");
    let spec = spec_file(&dir, r#"{"p": 3, "twist": [0, 0, 1]}"#);
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for out in [&a, &b] {
        assert_eq!(run(&["lfunction", "--spec", &spec, "--n-max", "4", "--out", out.to_str().unwrap()]), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc = read(&a);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["newton_slopes"][0], "1/2");
    assert!(doc.get("runtime_s").is_none());
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let out = dir.join("o.json");
    let out = out.to_str().unwrap();
    let cases = [
        (r#"{"p": 3, "twist": [0, 0, 0, 1]}"#, 3),
        (r#"{"p": 3, "q": 9, "twist": [0, 1]}"#, 3),
        (r#"{"p": 3, "twist": [0, 1], "colour": 1}"#, 2),
        (r#"{"p": 4, "twist": [0, 1]}"#, 2),
        ("not json", 2),
    ];
    for (text, code) in cases {
        let spec = spec_file(&dir, text);
        assert_eq!(run(&["lfunction", "--spec", &spec, "--n-max", "2", "--out", out]), code, "{}", text);
    }
    let doc = read(std::path::Path::new(out));
    assert_eq!(doc["status"], "spec-error");
    assert_eq!(run(&["lfunction", "--spec", "/nonexistent/spec.json", "--n-max", "2", "--out", out]), 2);
}

#[test]
fn fourier_rank_is_constant() {
    let dir = scratch("fourier");
    let spec = spec_file(&dir, r#"{"p": 5, "twist": [0, 0, 0, 1]}"#);
    let out = dir.join("f.json");
    assert_eq!(run(&["fourier", "--spec", &spec, "--fibers", "0,1,2,3,4,0.1", "--out", out.to_str().unwrap()]), 0);
    let doc = read(&out);
    assert_eq!(doc["dimension"], 2);
    assert_eq!(doc["fibers"].as_array().unwrap().len(), 6);
    assert_eq!(doc["fibers"][5]["q"], 25);
    assert_eq!(run(&["fourier", "--spec", &spec, "--fibers", "", "--out", out.to_str().unwrap()]), 0);
    assert_eq!(read(&out)["fibers"], Value::Array(vec![]));
}

#[test]
fn verify_weyl_suite() {
    let dir = scratch("verify");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    assert_eq!(run(&["verify", "--suite", "weyl", "--seed", "5", "--out", a.to_str().unwrap()]), 0);
    assert_eq!(run(&["verify", "--suite", "weyl", "--seed", "5", "--out", b.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc = read(&a);
    assert_eq!(doc["summary"]["all_pass"], true);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["criterion"] == 7));
    assert_eq!(run(&["verify", "--suite", "weyl", "--timings", "--out", a.to_str().unwrap()]), 0);
    assert!(read(&a)["checks"][0].get("runtime_s").is_some());
}

#[test]
fn bad_suite_name_is_a_usage_error() {
    assert_eq!(run(&["verify", "--suite", "everything", "--out", "/dev/null"]), 2);
}
