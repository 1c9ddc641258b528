use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wittkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittkit")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn first_status(v: &Value) -> &str {
    v["checks"][0]["status"].as_str().unwrap()
}

#[test]
fn omega_axioms_pass() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "omega.json", r#"{"type":"omega","lambda":[2,3],"a":1}"#);
    let out = wittkit(&["verify-axioms", arg(&spec), "--window", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first_status(&json(&out)), "pass");
}

#[test]
fn zero_lambda_is_rejected() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", r#"{"type":"omega","lambda":[0,3],"a":1}"#);
    let out = wittkit(&["verify-axioms", arg(&spec)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonzero"));
}

#[test]
fn parse_errors_report_the_line() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "broken.json", "{\n  \"type\": \"omega\",\n  \"lambda\": [2,,\n}");
    let out = wittkit(&["verify-axioms", arg(&spec)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn sign_flip_fixture_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "flip.json", r#"{"type":"sign_flip","P":{"type":"omega","lambda":[2],"a":1}}"#);
    let out = wittkit(&["verify-axioms", arg(&spec), "--window", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(first_status(&v), "fail");
    assert!(v["checks"][0]["witness"].as_str().unwrap().contains("commutator"));
}

fn derham_rows(spec: &str, extra: &[&str]) -> Vec<(u64, u64, String)> {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "weyl.json", spec);
    let mut args = vec!["derham", arg(&spec)];
    args.extend_from_slice(extra);
    let out = wittkit(&args);
    assert_eq!(out.status.code(), Some(0));
    json(&out)["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["rank"].as_u64().unwrap(), r["fiber0"].as_u64().unwrap(), r["verdict"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn derham_table_in_two_variables() {
    let rows = derham_rows(r#"{"type":"weyl","f":[["1"],["1"]]}"#, &["--range", "1..2"]);
    assert_eq!(rows, vec![(1, 1, "free".to_string()), (1, 2, "not_free".to_string())]);
}

#[test]
fn derham_ranks_in_three_variables() {
    let rows = derham_rows(r#"{"type":"weyl","f":[["1"],["1"],["1"]]}"#, &[]);
    let ranks: Vec<u64> = rows.iter().map(|r| r.0).collect();
    assert_eq!(ranks, vec![1, 2, 1]);
}

#[test]
fn derham_empty_range() {
    assert!(derham_rows(r#"{"type":"weyl","f":[["1"],["1"]]}"#, &["--range", "2..1"]).is_empty());
}

#[test]
fn weighting_omega_in_one_variable() {
    let out = wittkit(&["iso", "weighting-omega", "--d", "1", "--lambda", "2", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first_status(&json(&out)), "pass");
}

#[test]
fn iterated_tensor_defaults() {
    let out = wittkit(&["iso", "iterated-tensor"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(first_status(&json(&out)), "pass");
}

#[test]
fn twist_with_non_weight_module_is_inconclusive() {
    let gl = r#"{"kind":"matrices","dim":2,"entries":[[1,1,0,0,"1"],[1,1,0,1,"1"],[1,1,1,1,"1"]]}"#;
    let out = wittkit(&["iso", "twist", "--d", "1", "--gl", gl]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(first_status(&v), "inconclusive");
    assert!(v["checks"][0]["witness"].as_str().unwrap().contains("not diagonalizable"));
}

#[test]
fn weyl_info_reports_degrees_and_fibers() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "weyl.json", r#"{"type":"weyl","f":[["0","1"],["D2","1"]]}"#);
    let out = wittkit(&["weyl-info", arg(&spec), "--point", "0,0", "--point", "1/2,-1/3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 4);
    for f in v["fibers"].as_array().unwrap() {
        assert_eq!(f["fiber"]["from_relations"], 4);
        assert_eq!(f["fiber"]["from_normal_forms"], 4);
    }
}

#[test]
fn malformed_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"seed": "many"}"#);
    let out = wittkit(&["report", "--config", arg(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    let cfg = write(&dir, "cfg2.json", r#"{"criteria": [42]}"#);
    assert_eq!(wittkit(&["report", "--config", arg(&cfg)]).status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(wittkit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn report_is_deterministic_and_records_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"dims":[1,2],"criteria":[2,5,8]}"#);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let run = wittkit(&["report", "--config", arg(&cfg), "--seed", "7", "--json-out", arg(out)]);
        assert_eq!(run.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn shipped_config_is_the_default() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../config/default.json");
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(wittkit::harness::Config::from_json(&text).unwrap(), wittkit::harness::Config::default());
}
