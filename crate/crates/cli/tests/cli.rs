use std::process::{Command, Output};

use legendre_cli::{run, Command as Cmd, Depth, RunConfig};
use serde_json::Value;

fn legendre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legendre"))
        .args(args)
        .env_remove("LEGENDRE_MAX_DOUBLINGS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = legendre(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn rat(v: &Value) -> String {
    let (n, d) = (v["num"].as_str().unwrap(), v["den"].as_str().unwrap());
    if d == "1" {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

#[test]
fn invalid_parameters_exit_with_two() {
    for args in [
        &["points", "--p", "2"][..],
        &["points", "--p", "9"],
        &["gram", "--m", "0"],
        &["invariants", "--p", "3", "--q", "10"],
        &["rb", "--p", "3", "--f", "2"],
        &["gram", "--p", "13", "--f", "4"],
    ] {
        let out = legendre(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_doubling_cap_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_legendre"))
        .args(["gram"])
        .env("LEGENDRE_MAX_DOUBLINGS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn too_few_doublings_fail_honestly() {
    // d = 8 needs six doublings for P0
    let out = Command::new(env!("CARGO_BIN_EXE_legendre"))
        .args(["gram", "--p", "7", "--depth", "quick"])
        .env("LEGENDRE_MAX_DOUBLINGS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gram_d4() {
    let v = json(&["gram", "--p", "3", "--f", "1"]);
    assert_eq!(v["passed"], true);
    assert_eq!(rat(&v["determinant"]), "9/16");
    assert_eq!(v["rank"], 2);
    assert_eq!(rat(&v["computed"]["entries"][0][0]), "3/4");
    assert_eq!(rat(&v["computed"]["entries"][0][2]), "-3/4");
    let labels: Vec<_> = v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["torsion_label"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(labels, ["T'", "T"]);
}

#[test]
fn quick_gram_is_a_sample() {
    let v = json(&["gram", "--p", "5", "--depth", "quick"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["computed"]["labels"].as_array().unwrap().len(), 4);
    assert_eq!(rat(&v["determinant"]), "625/144");
    assert_eq!(v["determinant_source"], "theoretical");
}

#[test]
fn invariants_rank_over_prime_field() {
    let v = json(&["invariants", "--p", "3", "--f", "1", "--q", "3"]);
    assert_eq!(v["rank"], 1);
    assert!(v["bsd"].is_null());
    assert_eq!(v["frobenius_sublattice"]["gram_rank"], 1);
}

#[test]
fn invariants_sha_with_index() {
    let v = json(&["invariants", "--p", "5", "--f", "1", "--m", "5"]);
    assert_eq!(v["bsd"]["sha"], "25");
    assert_eq!(v["passed"], true);
    assert_eq!(rat(&v["bsd"]["residue"]), "1");
}

#[test]
fn rb_rank() {
    let v = json(&["rb", "--p", "5"]);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["admissible_b"], serde_json::json!([1, 4]));
    let v = json(&["rb", "--p", "3"]);
    assert_eq!(v["torsion_flagged"], serde_json::json!(["R0"]));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let a = legendre(&["verify-all", "--p", "5"]);
    let b = legendre(&["verify-all", "--p", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_and_table_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.txt");
    let out = legendre(&[
        "points",
        "--p",
        "3",
        "--format",
        "table",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("2T = Q0"));
    assert!(text.ends_with("result: PASS\n"));
}

#[test]
fn library_entry_point() {
    let mut cfg = RunConfig::new(Cmd::Isogeny, 7, 1);
    cfg.depth = Depth::Quick;
    let out = run(&cfg).unwrap();
    assert!(out.passed);
    assert_eq!(out.json["samples"].as_array().unwrap().len(), 20);
    assert_eq!(out.exit_code(), 0);
}
