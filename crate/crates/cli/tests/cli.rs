use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn balg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balg")).args(args).output().expect("spawn balg")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("suite.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: &str = r#"{
  "algebras": [{"name": "P2", "kind": "powerset", "atoms": 2}, {"name": "FC", "kind": "finite_cofinite"}],
  "suites": ["core_axioms", "place_addition", "bands"],
  "trials": 20,
  "seed": 7
}"#;

#[test]
fn eval_examples() {
    let cases = [
        ("P(3)", "{1,2} & !{2}", "{1}"),
        ("powerset:2", "{1} | {2}", "{1,2}"),
        ("FC", "cof{0,2} & fin{0,1,5}", "fin{1,5}"),
        ("P(3)", "2*chi({1,2}) + 3*chi({2,3})", "2*chi({1}) + 5*chi({2}) + 3*chi({3})"),
        ("FC", "chi(cof{0}) + chi(fin{0})", "1*chi(cof{})"),
    ];
    for (alg, expr, want) in cases {
        let out = balg(&["eval", "--algebra", alg, "--expr", expr]);
        assert!(out.status.success(), "{alg} {expr}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out).trim(), want, "{alg} {expr}");
    }
}

#[test]
fn eval_rejects_bad_input() {
    for (alg, expr) in [("P(3)", "{4}"), ("P(99)", "0"), ("Q", "0"), ("P(2)", "{1} &")] {
        assert_eq!(balg(&["eval", "--algebra", alg, "--expr", expr]).status.code(), Some(2), "{alg} {expr}");
    }
}

#[test]
fn verify_passes_and_respects_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let first = balg(&["verify", "--config", &cfg, "--seed", "11"]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let report: Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 3);
    assert_eq!(report["config_echo"]["seed"], 11);

    let mut again: Value = serde_json::from_str(&stdout(&balg(&["verify", "--config", &cfg, "--seed", "11"]))).unwrap();
    let mut first = report;
    strip(&mut first);
    strip(&mut again);
    assert_eq!(first, again);
}

fn strip(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("elapsed_ms");
            map.remove("total_elapsed_ms");
            map.values_mut().for_each(strip);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip),
        _ => {}
    }
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let path = dir.path().join("out.json");
    let out = balg(&["verify", "--config", &cfg, "--report", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["version"], "1");
    assert!(stdout(&out).contains("core_axioms"));
}

#[test]
fn broken_fixture_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
          "algebras": [{"name": "P2", "kind": "powerset", "atoms": 2}],
          "suites": [{"name": "homomorphisms", "fixture": "broken_homomorphism"}],
          "trials": 20,
          "seed": 1
        }"#,
    );
    let out = balg(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["suites"][0]["verdict"], "fail");
}

#[test]
fn bad_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bodies = [
        "{ not json",
        r#"{"algebras": [], "suites": ["core_axioms"], "trials": 5, "seed": 1, "extra": 0}"#,
        r#"{"algebras": [{"name": "P", "kind": "powerset", "atoms": 40}], "suites": ["core_axioms"], "trials": 5, "seed": 1}"#,
        r#"{"algebras": [{"name": "P", "kind": "powerset", "atoms": 2}], "suites": [{"name": "core_axioms", "algebras": ["Q"]}], "trials": 5, "seed": 1}"#,
        r#"{"algebras": [{"name": "P", "kind": "powerset", "atoms": 2}], "suites": ["no_such_suite"], "trials": 5, "seed": 1}"#,
    ];
    for body in bodies {
        let cfg = write_config(dir.path(), body);
        let out = balg(&["verify", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(balg(&["verify", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn certify_targets() {
    for target in ["evens", "diagonal"] {
        let out = balg(&["certify", "--target", target, "--steps", "4"]);
        assert_eq!(out.status.code(), Some(0), "{target}");
        let cert: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(cert["kind"], "no_supremum");
        assert_eq!(cert["steps"].as_array().unwrap().len(), 4);
    }
    let out = balg(&["certify", "--target", "evens", "--start", "fin{0,2}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not_upper_bound"));
}
