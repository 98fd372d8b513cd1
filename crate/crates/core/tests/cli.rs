//! Black-box tests of the groupfeq binary.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_groupfeq"))
}

#[test]
fn homog_dim_q8() {
    let out = bin().args(["homog-dim", "--group", "q8"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["predicted"], 17);
    assert_eq!(v["report"]["match"], true);
    assert_eq!(v["group"]["order"], 8);
}

#[test]
fn irreps_s3() {
    let out = bin().args(["irreps", "--group", "s3"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let irreps = v["report"]["irreps"].as_array().unwrap();
    let mut dims: Vec<u64> = irreps.iter().map(|i| i["dim"].as_u64().unwrap()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2]);
    assert!(irreps.iter().all(|i| i["type"] == "Real"));
}

#[test]
fn classify_zero_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tuple.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{"kind":"C","n":1,"A":[[[0.0,0.0]]],"B":[[[0.0,0.0]]]}}"#
    )
    .unwrap();
    let out = bin()
        .args(["classify-tuple", "--group", "trivial", "--tuple"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["admissible"], true);
    assert_eq!(v["report"]["family"], "Trivial");
}

#[test]
fn unknown_group_is_a_usage_error() {
    let out = bin().args(["group", "--group", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_tol_is_a_usage_error() {
    let out = bin()
        .args(["group", "--group", "s3", "--tol", "-1.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let run = || {
        bin()
            .args(["solve-special", "--group", "q8", "--seed", "11", "dalembert"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_all_passes_on_s3() {
    let out = bin()
        .args(["verify", "--group", "s3", "--all"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["all_pass"], true);
}
