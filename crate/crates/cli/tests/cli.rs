use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn jkpencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jkpencil")).args(args).current_dir(dir()).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(dir().join("golden").join(name)).unwrap()
}

fn assert_json_golden(args: &[&str], name: &str) {
    let o = jkpencil(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let got: Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    let want: Value = serde_json::from_str(&golden(name)).unwrap();
    assert_eq!(got, want);
}

#[test]
fn golden_decompose_zero() {
    assert_json_golden(&["--json", "decompose", "fixtures/zero1x1.json"], "decompose_zero1x1.json");
}

#[test]
fn golden_subspaces() {
    assert_json_golden(&["--json", "subspaces", "--heights", "3,1", "--enumerate"], "subspaces_3_1.json");
}

#[test]
fn golden_distribution() {
    assert_json_golden(&["--json", "distribution", "--signature", "1,1"], "distribution_1_1.json");
}

#[test]
fn golden_text_reports() {
    let o = jkpencil(&["decompose", "fixtures/rotation4.json", "--real"]);
    assert_eq!(stdout(&o), golden("decompose_rotation4.txt"));
    let o = jkpencil(&["product", "turiel:1", "flat:0:1"]);
    assert_eq!(stdout(&o), golden("product_turiel1_flat.txt"));
}

#[test]
fn zero_pencil_is_one_trivial_kronecker_block() {
    let o = jkpencil(&["--json", "decompose", "fixtures/zero1x1.json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["blocks"], serde_json::json!([{"kind": "kronecker", "index": 0}]));
}

#[test]
fn count_matches_enumeration() {
    let o = jkpencil(&["subspaces", "--heights", "3,1", "--count"]);
    assert_eq!(stdout(&o).trim(), "6");
    let brute = (0..=3).flat_map(|a: i32| (0..=1).map(move |b: i32| (a, b))).filter(|&(a, b)| a >= b && 3 - a >= 1 - b);
    assert_eq!(brute.count(), 6);
}

#[test]
fn small_kernel_is_reported_non_integrable() {
    let o = jkpencil(&["--json", "distribution", "--signature", "1,1", "--tuple", "ker:1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["tuple"], serde_json::json!([1, 1]));
    assert_eq!(row["computed"], "non-integrable");
    assert!(!row["witness"].is_null());
    assert_eq!(row["commutator"]["matches_formula"], true);
}

#[test]
fn every_subcommand_emits_json() {
    let cases: &[&[&str]] = &[
        &["--json", "decompose", "fixtures/mixed5.json"],
        &["--json", "subspaces", "--heights", "2,1", "--mults", "1,2", "--count"],
        &["--json", "subspaces", "--heights", "2,1", "--check", "0,1", "--trials", "20"],
        &["--json", "subspaces", "--heights", "2", "--verify", "--trials", "10"],
        &["--json", "turiel", "--signature", "2,1", "--check", "frames"],
        &["--json", "distribution", "--signature", "2", "--tuple", "im:1"],
        &["--json", "product", "turiel:1", "turiel:1"],
    ];
    for args in cases {
        let o = jkpencil(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_str::<Value>(&stdout(&o)).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn non_admissible_tuple_gets_a_witness() {
    let o = jkpencil(&["--json", "subspaces", "--heights", "2,1", "--check", "0,1", "--trials", "20"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["admissible"], false);
    assert_eq!(v["verdict"], "not-invariant");
    assert_eq!(v["witness"].as_array().unwrap().len(), 6);
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("jkpencil-cli-{}.json", std::process::id()));
    let o = jkpencil(&["--json", "--output", path.to_str().unwrap(), "subspaces", "--heights", "3,1", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["count"], 6);
    std::fs::remove_file(path).unwrap();
}

fn exit_code(args: &[&str]) -> (Option<i32>, String) {
    let o = jkpencil(args);
    (o.status.code(), String::from_utf8_lossy(&o.stderr).into_owned())
}

#[test]
fn malformed_input_exits_1() {
    for args in [
        &["decompose", "fixtures/missing.json"][..],
        &["distribution", "--signature", "1,2"],
        &["distribution", "--signature", "x"],
        &["subspaces", "--heights", "1,3"],
        &["subspaces", "--heights", "2,1", "--check", "a,b"],
        &["product", "flat:q:1"],
        &["selftest", "--only", "12"],
        &["frobnicate"],
    ] {
        assert_eq!(exit_code(args).0, Some(1), "{args:?}");
    }
    let (code, err) = exit_code(&["distribution", "--signature", "2,x"]);
    assert_eq!(code, Some(1));
    assert!(err.contains("--signature"), "{err}");
}

#[test]
fn malformed_pencil_names_the_field() {
    let path = std::env::temp_dir().join(format!("jkpencil-bad-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"n":2,"A":[["0","1"],["1","0"]],"B":[["0","0"],["0","0"]]}"#).unwrap();
    let (code, err) = exit_code(&["decompose", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, Some(1));
    assert!(err.contains("A[0][1]"), "{err}");
}

#[test]
fn precondition_violations_exit_2() {
    assert_eq!(exit_code(&["distribution", "--signature", "2,1", "--tuple", "0,1"]).0, Some(2));
    assert_eq!(exit_code(&["distribution", "--signature", "2,1", "--tuple", "1"]).0, Some(2));
    assert_eq!(exit_code(&["subspaces", "--heights", "2,1", "--check", "3,0"]).0, Some(2));
    assert_eq!(exit_code(&["product", "flat:0:1", "flat:0:2"]).0, Some(2));
}

#[test]
fn selftest_is_deterministic() {
    let run = || {
        let o = jkpencil(&["--json", "selftest", "--seed", "7", "--only", "2,4,9"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        for r in v["results"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("seconds");
        }
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_jkpencil"))
        .args(["subspaces", "--heights", "1", "--count"])
        .env("JKPENCIL_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_jkpencil"))
        .args(["subspaces", "--heights", "1", "--count"])
        .env("JKPENCIL_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
