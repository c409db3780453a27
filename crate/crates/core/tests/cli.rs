mod common;

use common::{wred, CORPUS};

#[test]
fn check_nat_is_coherent_without_reductions() {
    let out = wred(&["check", "@ex-nat.json"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().next(), Some("coherent; classification: NoReductions"));
}

#[test]
fn collapse_has_a_single_element() {
    let out = wred(&["build-initial", "@ex-collapse.json", "--engine", "classical"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("carrier size 1"), "{}", out.stdout);
    assert!(out.stdout.contains("{*}"), "{}", out.stdout);
}

#[test]
fn nat_recovery_agrees_at_depth_four() {
    let out = wred(&["recover-wtype", "@ex-nat.json", "--depth", "4"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("carriers agree: 4 elements"), "{}", out.stdout);
}

#[test]
fn corpus_exit_codes() {
    for (args, code) in CORPUS {
        let out = wred(args);
        assert_eq!(out.code, *code, "{args:?}\n{}{}", out.stdout, out.stderr);
    }
}

#[test]
fn json_reports_start_with_exit_code_and_summary() {
    let out = wred(&["check", "@ex-nat.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys[..2], ["exit_code", "summary"]);
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn unknown_flag_prints_usage() {
    let out = wred(&["check", "@ex-nat.json", "--bogus"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("Usage"), "{}", out.stderr);
}

#[test]
fn binary_propagates_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_wred");
    let run = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let ok = run(&["check", &common::fixture("ex-nat.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("coherent"));
    let no = run(&["rlp", &common::fixture("gen-pt.json"), &common::fixture("map-small.json")]);
    assert_eq!(no.status.code(), Some(1));
    let bad = run(&["nonsense"]);
    assert_eq!(bad.status.code(), Some(3));
}
