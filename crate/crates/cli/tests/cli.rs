use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_shatterkit");

fn shatterkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("SHATTERKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn validator() -> jsonschema::Validator {
    let text = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Runs, expects exit 0, validates the report and returns it.
fn report(dir: &Path, args: &[&str]) -> Value {
    let out = shatterkit(dir, args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}\n{v:#}");
    v
}

fn value(r: &Value, name: &str) -> Value {
    r["outputs"][name]["value"].clone()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("square.json"), r#"{"values": [[0,0],[1,0],[0,1],[1,1]]}"#).unwrap();
    fs::write(p.join("singletons.csv"), "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n").unwrap();
    fs::write(p.join("pm.json"), r#"{"values": [[1,0,0],[-1,0,0]]}"#).unwrap();
    fs::write(p.join("cross.json"), r#"{"vertices": [[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]]}"#).unwrap();
    dir
}

#[test]
fn every_subcommand_emits_a_valid_report() {
    let dir = workspace();
    let d = dir.path();

    let r = report(d, &["dim", "square.json", "--t", "1"]);
    assert_eq!(value(&r, "v"), 2);
    assert_eq!(r["inputs"]["class"], "square.json");

    let r = report(d, &["entropy", "singletons.csv", "--t", "0.5"]);
    assert!((value(&r, "entropy").as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
    let r = report(d, &["entropy", "singletons.csv", "--t", "0.5", "--mode", "greedy", "--body", "linf"]);
    assert_eq!(r["outputs"]["entropy"]["provenance"], "greedy-bound");
    report(d, &["entropy", "singletons.csv", "--t", "0.5", "--mode", "kp", "--budget", "20"]);

    let r = report(d, &["cover", "square.json", "--radius", "0.5", "--body", "cube"]);
    assert_eq!(value(&r, "lower"), value(&r, "upper"));

    let r = report(d, &["cellcontent", "square.json"]);
    assert_eq!(value(&r, "sigma"), 4);
    report(d, &["cellcontent", "square.json", "--bounds", "0,1"]);

    let r = report(d, &["tree", "square.json", "--gap", "1"]);
    assert_eq!(value(&r, "leaves"), 4);
    assert_eq!(value(&r, "verified"), true);
    let r = report(d, &["tree", "square.json", "--gap", "1", "--strategy", "greedy-potential"]);
    assert_eq!(r["outputs"]["leaves"]["provenance"], "greedy-bound");

    let r = report(d, &["lorentz", "norm", "--vector", "2,1", "--phi", "power:2"]);
    assert!((value(&r, "norm").as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    let r = report(d, &["lorentz", "compare", "--phi", "power:1", "--psi", "power:2", "--t", "0.5"]);
    assert!((value(&r, "value").as_f64().unwrap() - 4.0).abs() < 1e-6);
    let r = report(d, &["lorentz", "compare", "--phi", "power:2", "--psi", "power:1", "--t", "0.5"]);
    assert_eq!(value(&r, "value"), "inf");

    let r = report(d, &["gauss", "pm.json", "--samples", "2000"]);
    assert_eq!(r["outputs"]["supremum"]["provenance"], "monte-carlo");
    assert!(r["outputs"]["supremum"]["stderr"].as_f64().unwrap() > 0.0);
    let r = report(d, &["rad", "pm.json", "--samples", "100"]);
    assert!((value(&r, "supremum").as_f64().unwrap() - 3f64.sqrt().recip()).abs() < 1e-12);

    let r = report(d, &["integral", "comb", "square.json"]);
    assert!((value(&r, "value").as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    report(d, &["integral", "dudley", "square.json"]);
    report(d, &["integral", "comb", "square.json", "--grid", "0.25,0.5,1,1.5"]);

    let r = report(d, &["nosudakov", "--n", "64", "--samples", "200"]);
    assert_eq!(value(&r, "k1"), 1);

    let r = report(d, &["select", r#"{"kind":"binomial","m":200,"delta":0.3,"epsilon":0.5,"t":30}"#, "--trials", "200"]);
    assert!(value(&r, "success_rate").as_f64().unwrap() > 0.9);

    let r = report(d, &["section", "cross.json", "--m", "1"]);
    assert_eq!(value(&r, "holds"), true);
    let r = report(d, &["section", "cross.json", "--samples", "300"]);
    assert_eq!(r["outputs"]["M"]["provenance"], "monte-carlo");

    let r = report(d, &["verify", "--suite", "box-identities", "--suite", "lorentz-oracle"]);
    assert_eq!(value(&r, "box-identities")["passed"], true);
}

#[test]
fn verify_lemma_many_cells() {
    let dir = workspace();
    let r = report(dir.path(), &["verify", "--suite", "lemma-many-cells", "--seed", "7"]);
    let s = value(&r, "lemma-many-cells");
    assert_eq!((s["instances"].as_u64(), s["failures"].as_u64()), (Some(1000), Some(0)));
    assert_eq!(r["provenance"]["seed"], 7);
}

#[test]
fn missing_file_is_reported() {
    let dir = workspace();
    let out = shatterkit(dir.path(), &["dim", "missing.json", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("file not found") && err.contains("missing.json"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn exit_codes() {
    let dir = workspace();
    let d = dir.path();
    assert_eq!(shatterkit(d, &["dim", "square.json", "--t", "1", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(shatterkit(d, &["nonsense"]).status.code(), Some(1));
    assert_eq!(shatterkit(d, &["dim", "square.json", "--t", "-1"]).status.code(), Some(1));
    assert_eq!(shatterkit(d, &["verify", "--suite", "no-such-suite"]).status.code(), Some(1));
    assert_eq!(shatterkit(d, &["--help"]).status.code(), Some(0));
    fs::write(d.join("ragged.json"), r#"{"values": [[0,0],[1]]}"#).unwrap();
    let out = shatterkit(d, &["dim", "ragged.json", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));
}

#[test]
fn fixture_drift_names_the_constant() {
    let dir = workspace();
    let d = dir.path();
    let pinned = include_str!("../../core/fixtures/calibration.json");
    fs::write(d.join("same.json"), pinned).unwrap();
    let r = report(d, &["dim", "square.json", "--t", "1", "--fixture", "same.json"]);
    assert_eq!(r["provenance"]["fixture"]["source"], "same.json");

    let mut drifted: Value = serde_json::from_str(pinned).unwrap();
    drifted["tower_cover"]["c"] = 4.0.into();
    fs::write(d.join("drifted.json"), drifted.to_string()).unwrap();
    let out = shatterkit(d, &["verify", "--suite", "box-identities", "--fixture", "drifted.json"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("tower_cover.c"), "{err}");
}

#[test]
fn failing_suite_exits_with_verification_code() {
    let dir = workspace();
    let out = shatterkit(dir.path(), &["verify", "--suite", "discrepancy"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(validator().is_valid(&v));
    assert_eq!(value(&v, "discrepancy")["passed"], false);
}

fn write_manifest(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = workspace();
    let d = dir.path();
    write_manifest(d, "gauss.json", r#"{"command": "gauss", "parameters": ["pm.json", "--samples", "500"], "seed": 11}"#);
    let first = shatterkit(d, &["run", "gauss.json"]);
    let second = shatterkit(d, &["run", "gauss.json", "--threads", "1"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let direct = shatterkit(d, &["gauss", "pm.json", "--samples", "500", "--seed", "11"]);
    assert_eq!(first.stdout, direct.stdout);

    shatterkit(d, &["run", "gauss.json", "--out", "a.json"]);
    shatterkit(d, &["run", "gauss.json", "--out", "b.json"]);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());
    assert_eq!(fs::read(d.join("a.json")).unwrap(), first.stdout);
}

#[test]
fn manifest_sweep() {
    let dir = workspace();
    let d = dir.path();
    write_manifest(
        d,
        "sweep.json",
        r#"{"command": "dim", "parameters": ["square.json"], "seed": 3, "sweep": {"parameter": "t", "values": [0.5, 1.0, 2.0]}}"#,
    );
    let a = shatterkit(d, &["run", "sweep.json"]);
    let b = shatterkit(d, &["run", "sweep.json"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(validator().is_valid(&v));
    let dims: Vec<u64> = v["runs"].as_array().unwrap().iter().map(|r| r["outputs"]["v"]["value"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![2, 2, 0]);
}

#[test]
fn bad_manifests() {
    let dir = workspace();
    let d = dir.path();
    write_manifest(d, "nested.json", r#"{"command": "run", "parameters": ["nested.json"]}"#);
    assert_eq!(shatterkit(d, &["run", "nested.json"]).status.code(), Some(1));
    write_manifest(d, "unknown.json", r#"{"command": "dim", "parameters": ["square.json", "--t", "1"], "colour": 1}"#);
    assert_eq!(shatterkit(d, &["run", "unknown.json"]).status.code(), Some(1));
    assert_eq!(shatterkit(d, &["run", "absent.json"]).status.code(), Some(2));
}

#[test]
fn threads_from_environment() {
    let dir = workspace();
    let out = Command::new(BIN)
        .args(["rad", "pm.json", "--samples", "50"])
        .current_dir(dir.path())
        .env("SHATTERKIT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(BIN)
        .args(["rad", "pm.json"])
        .current_dir(dir.path())
        .env("SHATTERKIT_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
