use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ccdual::io::{parse_encoder, parse_wam};
use ccdual::{build_ccf, compute_wam};
use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = r#"{"field":{"p":3,"s":1},"k":2,"n":3,"G":[[[1,0,1],[2,1],[0]],[[1],[0],[2]]]}"#;
const EXAMPLE_DUAL: &str = r#"{"field":{"p":3,"s":1},"k":1,"n":3,"G":[[[2,1],[2,0,2],[2,1]]]}"#;

fn ccode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccode")).args(args).output().expect("run ccode")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn verify_example_with_given_dual() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", EXAMPLE);
    let h = write(&dir, "h.json", EXAMPLE_DUAL);
    let out = ccode(&["verify-macwilliams", p(&g), "--dual", p(&h)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = stdout_json(&out);
    assert_eq!(cert["verdict"], "PASS");
    assert_eq!(cert["P"], serde_json::json!([[1, 1], [1, 2]]));
    assert_eq!(cert["entries_checked"], 81);
    assert_eq!(cert["entries_matched"], 81);
}

#[test]
fn verify_sequence_and_invariants_pass() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", EXAMPLE);
    let out = ccode(&["verify-sequence", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "PASS");
    let out = ccode(&["check-invariants", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn mw_transform_of_first_gamma_entry() {
    let out = ccode(&["mw-transform", "--n", "3", "--q", "3", "--poly", "1/3,2,4,8/3", "--format", "pretty"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "9");
    let out = ccode(&["mw-transform", "--n", "3", "--q", "3", "--poly", "1/3,-1,1,-1/3"]);
    assert_eq!(stdout_json(&out)["output"], serde_json::json!(["0", "0", "0", "9"]));
}

#[test]
fn wam_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", EXAMPLE);
    let target = dir.path().join("wam.json");
    let out = ccode(&["wam", p(&g), "--output", p(&target)]);
    assert_eq!(out.status.code(), Some(0));
    let parsed = parse_wam(&fs::read_to_string(&target).unwrap()).unwrap();
    let expected = compute_wam(&build_ccf(&parse_encoder(EXAMPLE).unwrap()).unwrap()).unwrap();
    assert_eq!(parsed, expected);
}

#[test]
fn wam_of_block_code_is_its_enumerator() {
    let dir = TempDir::new().unwrap();
    // The [3,2] even-weight code over F_2: we = 1 + 3W^2.
    let g = write(&dir, "g.json", r#"{"field":{"p":2},"k":2,"n":3,"G":[[[1],[1],[0]],[[0],[1],[1]]]}"#);
    let out = ccode(&["wam", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let wam = stdout_json(&out);
    assert_eq!(wam["delta"], 0);
    assert_eq!(wam["entries"], serde_json::json!([[0, 0, [1, 0, 3]]]));
}

#[test]
fn output_is_deterministic_across_runs_and_workers() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", EXAMPLE);
    for cmd in ["wam", "verify-macwilliams", "verify-sequence", "check-invariants", "info", "ccf", "dual"] {
        let a = ccode(&[cmd, p(&g), "--jobs", "1"]);
        let b = ccode(&[cmd, p(&g), "--jobs", "3"]);
        let c = ccode(&[cmd, p(&g)]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(a.stdout, c.stdout, "{cmd}");
    }
}

#[test]
fn info_reports_profile() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", EXAMPLE);
    let info = stdout_json(&ccode(&["info", p(&g)]));
    assert_eq!(info["delta"], 2);
    assert_eq!(info["forney_indices"], serde_json::json!([2, 0]));
    assert_eq!(info["minimal"], true);
    assert_eq!(info["we_const"], "1+2W^2");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"field\": {\"p\": 3},\n  \"k\": 2,\n  \"n\": }");
    let out = ccode(&["info", p(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column"));

    let g = write(&dir, "g.json", EXAMPLE);
    let wrong = write(&dir, "h.json", r#"{"field":{"p":3},"k":1,"n":3,"G":[[[1],[1],[1]]]}"#);
    let out = ccode(&["verify-macwilliams", p(&g), "--dual", p(&wrong)]);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_ccode"))
        .args(["wam", p(&g)])
        .env("CCDUAL_MAX_STATES", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));

    let out = ccode(&["ccf", p(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_minimal_encoder_is_rejected_by_ccf() {
    let dir = TempDir::new().unwrap();
    // Second row is D times the first: not basic.
    let g = write(&dir, "g.json", r#"{"field":{"p":2},"k":2,"n":3,"G":[[[1],[1],[0]],[[0,1],[0,1],[1]]]}"#);
    let out = ccode(&["ccf", p(&g)]);
    assert_eq!(out.status.code(), Some(2));
}
