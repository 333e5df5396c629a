use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fockbridge");

fn fockbridge(out: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("FOCKBRIDGE_OUT", out).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const PASSING: &str = r#"{
  "name": "eq9-delta",
  "kind": "verify-eq9",
  "modes": 1,
  "cutoff": "auto",
  "hamiltonian": "(phi[1]^2 + pi[1]^2)/2",
  "observable": "phi[1]^2",
  "distribution": { "kind": "delta", "state": { "phi": [1.0], "pi": [0.0] } }
}"#;

const FAILING: &str = r#"{
  "kind": "eq10-gap",
  "modes": 1,
  "cutoff": 20,
  "times": [0.7],
  "claim": { "claim": "discrepancy", "factor": 10 },
  "hamiltonian": "(phi[1]^2 + pi[1]^2)/2",
  "observable": "phi[1]^2",
  "distribution": { "kind": "delta", "state": { "phi": [1.0], "pi": [0.0] } }
}"#;

#[test]
fn version_and_usage() {
    let dir = tempfile::tempdir().unwrap();
    let v = fockbridge(dir.path(), &["version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains(env!("CARGO_PKG_VERSION")));
    assert_eq!(fockbridge(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(fockbridge(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(fockbridge(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn reduce_prints_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = fockbridge(dir.path(), &["reduce", "a[1]*ad[1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(1+0i) + (1+0i)*ad[1]*a[1]\n");
    let bad = fockbridge(dir.path(), &["reduce", "a[1]**ad[1]"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("column"));
}

#[test]
fn run_writes_reports_under_output_root() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("eq9.json");
    std::fs::write(&config, PASSING).unwrap();
    let out = dir.path().join("reports");
    let o = fockbridge(&out, &["run", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("eq9-delta.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert!(report["timestamp"].is_u64());
    let csv = std::fs::read_to_string(out.join("eq9-delta.csv")).unwrap();
    assert!(csv.starts_with("experiment,") && csv.lines().count() == 2);
}

#[test]
fn run_reports_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("fail.json");
    std::fs::write(&config, FAILING).unwrap();
    let o = fockbridge(dir.path(), &["run", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn run_rejects_malformed_polynomial_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    std::fs::write(&config, PASSING.replace("phi[1]^2\"", "phi[1]^+2\"")).unwrap();
    let o = fockbridge(dir.path(), &["run", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 7") && err.contains("observable") && err.contains("column"), "{err}");
    let missing = fockbridge(dir.path(), &["run", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn suite_aggregates_in_name_order() {
    let dir = tempfile::tempdir().unwrap();
    let configs = dir.path().join("configs");
    let out = dir.path().join("out");
    std::fs::create_dir(&configs).unwrap();
    let o = fockbridge(&out, &["suite", configs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 passed, 0 failed, 0 errors"));

    std::fs::write(configs.join("z-pass.json"), PASSING).unwrap();
    std::fs::write(configs.join("a-fail.json"), FAILING).unwrap();
    let o = fockbridge(&out, &["suite", configs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.find("FAIL a-fail.json").unwrap() < text.find("PASS z-pass.json").unwrap());
    let suite: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("suite.json")).unwrap()).unwrap();
    assert_eq!((suite["passed"].as_u64(), suite["failed"].as_u64()), (Some(1), Some(1)));

    assert_eq!(fockbridge(&out, &["suite", dir.path().join("absent").to_str().unwrap()]).status.code(), Some(2));
}
