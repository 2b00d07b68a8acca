use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ualg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ualg")).args(args).output().expect("binary runs")
}

fn run_to(dir: &TempDir, name: &str, args: &[&str]) -> (i32, Value) {
    let path = dir.path().join(name);
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["-o", p]);
    let out = ualg(&all);
    let code = out.status.code().unwrap();
    (code, read(&path))
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sharpness_certificate_and_recheck() {
    let dir = TempDir::new().unwrap();
    let (code, cert) = run_to(&dir, "s.json", &["verify", "sharpness", "--m", "4", "--q", "2"]);
    assert_eq!(code, 0);
    assert_eq!(cert["verdict"], "verified");
    assert_eq!(cert["evidence"]["canonical_chain"].as_array().unwrap().len(), 5);
    assert!(dir.path().join("s.json.coords.json").exists());
    let re = ualg(&["--recheck", dir.path().join("s.json").to_str().unwrap()]);
    assert_eq!(re.status.code(), Some(0), "{}", String::from_utf8_lossy(&re.stderr));
}

#[test]
fn jonsson_level_of_n24() {
    let dir = TempDir::new().unwrap();
    let (code, cert) = run_to(&dir, "l.json", &["level", "--scheme", "jonsson", "--fixture", "N:2:4", "--expect", "4"]);
    assert_eq!(code, 0);
    assert_eq!(cert["evidence"]["level"], 4);
    let re = ualg(&["--recheck", dir.path().join("l.json").to_str().unwrap()]);
    assert_eq!(re.status.code(), Some(0));
    let (code, _) = run_to(&dir, "l3.json", &["level", "--scheme", "jonsson", "--fixture", "N:2:4", "--expect", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn absent_majority_on_i4() {
    let dir = TempDir::new().unwrap();
    let (code, cert) = run_to(&dir, "n.json", &["search", "--scheme", "nu", "--arity", "3", "--fixture", "I:4"]);
    assert_eq!(code, 1);
    assert_eq!(cert["evidence"]["outcome"]["result"], "not-found");
    let (code, _) = run_to(&dir, "n2.json", &["search", "--scheme", "nu", "--arity", "3", "--fixture", "I:4", "--expect", "absent"]);
    assert_eq!(code, 0);
    let re = ualg(&["--recheck", dir.path().join("n2.json").to_str().unwrap()]);
    assert_eq!(re.status.code(), Some(0));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (_, mut cert) = run_to(&dir, "l.json", &["level", "--scheme", "jonsson", "--fixture", "N:2:3"]);
    cert["evidence"]["level"] = Value::from(1);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, cert.to_string()).unwrap();
    let re = ualg(&["--recheck", path.to_str().unwrap()]);
    assert_eq!(re.status.code(), Some(1));
}

#[test]
fn caps_and_invalid_input() {
    let dir = TempDir::new().unwrap();
    let out = ualg(&["--cap", "3", "level", "--scheme", "jonsson", "--fixture", "N:2:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(ualg(&["level", "--scheme", "nonsense", "--fixture", "N:2:4"]).status.code(), Some(3));
    assert_eq!(ualg(&["verify", "sharpness", "--m", "2", "--q", "2"]).status.code(), Some(3));
    assert_eq!(ualg(&["frobnicate"]).status.code(), Some(3));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"label": "x", "size": 2, "ops": [{"name": "f", "arity": 1, "table": [0, 5]}]}"#).unwrap();
    let out = ualg(&["level", "--scheme", "jonsson", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn algebra_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let ujm = dir.path().join("n24.json");
    let out = ualg(&["build", "ujm", "--j", "2", "--m", "4", "--chain-size", "2", "-o", ujm.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let fx = dir.path().join("fx.json");
    assert_eq!(ualg(&["build", "fixtures", "--key", "N:2:4", "-o", fx.to_str().unwrap()]).status.code(), Some(0));
    let built = read(&ujm);
    let fixture = read(&fx);
    assert_eq!(built["ops"], fixture[0]["ops"]);
    let (code, cert) = run_to(&dir, "l.json", &["level", "--scheme", "jonsson", "--algebra", ujm.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(cert["evidence"]["level"], 4);
}
