//! End-to-end checks of the `mo8q` binary: exit codes, determinism, output routing, tamper rejection.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{Value, json};

fn mo8q(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mo8q")).args(args).env_remove("MO8Q_OUT_DIR").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn certify_canonical(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("cert.json");
    let out = mo8q(&["certify", "--p", "5", "--D", "60", "--family", "canonical", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn certify_is_deterministic_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = certify_canonical(dir.path());
    let first = std::fs::read(&path).unwrap();
    let again = mo8q(&["certify", "--p", "5", "--D", "60", "--family", "canonical"]);
    assert_eq!(code(&again), 0);
    assert_eq!(again.stdout, first);

    let verify = mo8q(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&verify), 0, "{}", String::from_utf8_lossy(&verify.stdout));
    let report: Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(report["sound"], json!(true));
}

#[test]
fn single_field_mutations_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = certify_canonical(dir.path());
    let original: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let digest = original["tower_digest"].as_str().unwrap();
    let flipped_digest = format!("{}{}", if digest.starts_with('0') { '1' } else { '0' }, &digest[1..]);
    let mutations: Vec<(&str, Value)> = vec![
        ("/degree", json!(56)),
        ("/prime", json!(7)),
        ("/kind", json!("surjectivity_failure")),
        ("/branch", json!("below_critical")),
        ("/witness_expression", json!("z15")),
        ("/evaluations/quotient/vanishes", json!(true)),
        ("/evaluations/tmf/vanishes", json!(false)),
        ("/evaluations/quotient/coordinates/0/1", json!("-2")),
        ("/source/elements/3", json!("5*x7")),
        ("/source/tail", json!("5*x2*x13")),
        ("/model/tail", json!("5*x2*x13")),
        ("/branch_check/kernel_matches_ideal", json!(false)),
        ("/tower_digest", json!(flipped_digest)),
        ("/claim_report_digest", json!("00")),
        ("/schema_version", json!(2)),
    ];
    for (pointer, value) in mutations {
        let mut doc = original.clone();
        *doc.pointer_mut(pointer).unwrap_or_else(|| panic!("{pointer} exists")) = value;
        let tampered = dir.path().join("tampered.json");
        std::fs::write(&tampered, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        let out = mo8q(&["verify", tampered.to_str().unwrap()]);
        assert_eq!(code(&out), 4, "mutation of {pointer} accepted: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&mo8q(&["model", "--p", "4", "--D", "60"])), 2);
    assert_eq!(code(&mo8q(&["model", "--p", "5", "--D", "41"])), 2);
    assert_eq!(code(&mo8q(&["no-such-command"])), 2);
    assert_eq!(code(&mo8q(&["certify", "--p", "5", "--D", "40", "--family", "canonical"])), 2);

    let refused = mo8q(&["certify", "--p", "5", "--D", "40", "--seq", "x4,x5,x6,x7,x8,x9,x10"]);
    assert_eq!(code(&refused), 3);
    let doc: Value = serde_json::from_slice(&refused.stdout).unwrap();
    assert_eq!(doc["required_bound"], json!(60));

    let rational = mo8q(&["certify", "--D", "40", "--seq", "x4,x5,x6"]);
    assert_eq!(code(&rational), 0);
    let doc: Value = serde_json::from_slice(&rational.stdout).unwrap();
    assert_eq!(doc["case"], json!("missing_degree"));

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_ne!(code(&mo8q(&["verify", missing.to_str().unwrap()])), 0);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"schema_version\": 1}").unwrap();
    assert_eq!(code(&mo8q(&["verify", garbage.to_str().unwrap()])), 4);
}

#[test]
fn out_dir_routing() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mo8q"))
        .args(["model", "--p", "5", "--D", "60"])
        .env("MO8Q_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&std::fs::read(dir.path().join("model.json")).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], json!(1));
}

#[test]
fn regular_and_demo_documents() {
    let out = mo8q(&["regular", "--p", "5", "--D", "60", "--seq", "x4,x5,x6,x7,x8,x9,x10,x11,x12,x13,x14,z15 - y15"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["regular"], json!(false));
    assert_eq!(doc["failure"]["index"], json!(12));

    let out = mo8q(&["demo-mspin", "--D", "24"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["matches"], json!(true));
}
