use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_systolica"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_systolica"))
        .args(args)
        .env("SYSTOLICA_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn make(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn close(v: &Value, expected: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - expected).abs() <= tol
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let zoll = make(&dir, "zoll.json", &["construct", "zoll", "--e", "2"]);
    let out = run(&["validate", s(&zoll)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], Value::Bool(true));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&zoll).unwrap()).unwrap();
    doc["euler"] = Value::from(3);
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, doc.to_string()).unwrap();
    let out = run(&["validate", s(&broken)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("derivative-jump"));

    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"format\": ").unwrap();
    assert_eq!(run(&["validate", s(&junk)]).status.code(), Some(2));
    assert_eq!(run(&["validate", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
}

#[test]
fn analyze_reference_profiles() {
    let dir = TempDir::new().unwrap();
    let ell = make(&dir, "ell.json", &["construct", "ellipsoid", "--a1", "1", "--a2", "2"]);
    let out = run(&["analyze", s(&ell)]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(close(&v["systole"]["value"], 1.0, 1e-9));
    assert!(close(&v["volume"], 2.0, 1e-9));
    assert!(close(&v["ratio"], 0.5, 1e-9));
    assert_eq!(v["inequality"]["branch"], "euler-one");

    let besse = make(&dir, "besse.json", &["construct", "besse", "--e", "5"]);
    let v = stdout_json(&run(&["analyze", s(&besse)]));
    assert!(close(&v["contractible"]["systole"], 1.0, 1e-9));
    assert_eq!(v["contractible"]["equality_flag"], Value::Bool(true));
    assert_eq!(v["classification"], "Besse-two-singular-equal");

    let zoll = make(&dir, "zoll.json", &["construct", "zoll", "--e", "2"]);
    let v = stdout_json(&run(&["analyze", s(&zoll)]));
    assert_eq!(v["inequality"]["equality_flag"], Value::Bool(true));
    assert_eq!(v["classification"], "Zoll");
}

#[test]
fn orbit_table_csv() {
    let dir = TempDir::new().unwrap();
    let ell = make(&dir, "ell.json", &["construct", "ellipsoid", "--a1", "1", "--a2", "2"]);
    let out = run(&["orbits", s(&ell), "--format", "csv", "--q-max", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,p,q,period,contractible_period,kind"));
    assert!(lines.any(|l| l.ends_with("endpoint_fiber")));
}

#[test]
fn eta_sweep() {
    let out = run(&["sweep-eta", "--e", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let ratios: Vec<f64> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios.windows(2).all(|w| w[0] < w[1]));
    assert!(ratios.iter().all(|&r| r < 0.5));
    assert!(*ratios.last().unwrap() >= 0.49);

    let v = stdout_json(&run(&["sweep-eta", "--e", "10"]));
    assert!(v.as_array().unwrap().iter().all(|row| row["ratio"].as_f64().unwrap() < 0.5));

    let edge = (1.0f64 / 5.0).to_string();
    assert_eq!(run(&["sweep-eta", "--e", "3", "--eta", &edge]).status.code(), Some(2));
    assert_eq!(run(&["sweep-eta", "--e", "2"]).status.code(), Some(2));
}

#[test]
fn audit_is_deterministic() {
    let empty = run(&["audit", "--count", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    let v = stdout_json(&empty);
    assert!(v["branches"].as_array().unwrap().iter().all(|b| b["min_margin"].is_null()));

    let args = ["audit", "--e", "1,3", "--count", "6", "--seed", "11", "--roundtrip-every", "3"];
    let a = run_with_threads(&args, "1");
    let b = run_with_threads(&args, "4");
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    for branch in v["branches"].as_array().unwrap() {
        assert!(branch["min_margin"].as_f64().unwrap() > 0.0);
        assert!(branch["min_certificate_margin"].as_f64().unwrap() >= -1e-9);
        assert_eq!(branch["roundtrips"], 2);
    }
    assert_eq!(run(&["audit", "--e", "-1", "--count", "1"]).status.code(), Some(2));
}

#[test]
fn revolution_reports() {
    let dir = TempDir::new().unwrap();
    let round = make(&dir, "round.json", &["metric", "round"]);
    let v = stdout_json(&run(&["revolution", s(&round)]));
    assert_eq!(v["equality_flag"], Value::Bool(true));
    assert!(close(&v["systole"], 2.0 * std::f64::consts::PI, 1e-6));
    assert!(v["ode_cross_check"]["max_relative_gap"].as_f64().unwrap() < 1e-5);

    let bumpy = make(&dir, "bumpy.json", &["metric", "perturbed", "--eps", "0.1"]);
    let v = stdout_json(&run(&["revolution", s(&bumpy)]));
    assert!(v["ratio"].as_f64().unwrap() < 1.0 - 1e-4);
    assert_eq!(v["equality_flag"], Value::Bool(false));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&round).unwrap()).unwrap();
    doc["rho"]["coefficients"] = serde_json::json!([1.2]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let out = run(&["revolution", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("validation"));
}

#[test]
fn random_construction_is_reproducible() {
    let a = run(&["construct", "random", "--e", "3", "--seed", "42"]);
    let b = run(&["construct", "random", "--e", "3", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.json");
    std::fs::write(&path, &a.stdout).unwrap();
    assert_eq!(run(&["validate", s(&path)]).status.code(), Some(0));
}
