//! End-to-end tests of the `verify` binary: exit codes, determinism,
//! fixture discovery, and the matrix dump.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("VERIFY_FIXTURES")
        .output()
        .expect("spawn verify")
}

fn fixtures_arg() -> String {
    fixtures().display().to_string()
}

#[test]
fn ampleness_suite_passes_with_exit_0() {
    let out = verify(&["run", "--suite", "ampleness", "--fixtures", &fixtures_arg()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  ampleness/stage3_region"), "{text}");
    assert!(text.contains("summary:"));
}

#[test]
fn json_report_is_byte_deterministic() {
    let args = ["run", "--suite", "fiber", "--format", "json", "--fixtures"];
    let a = verify(&[&args[..], &[fixtures_arg().as_str()]].concat());
    let b = verify(&[&args[..], &[fixtures_arg().as_str()]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(parsed["summary"]["fail"], 0);
    assert!(parsed["fixtures"][0]["checksum"].as_str().unwrap().len() == 64);
    // Exact values are strings, never floats.
    let checks = parsed["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for (_, v) in c["witness"].as_object().unwrap() {
            assert!(v.is_string());
        }
    }
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = verify(&[
        "run",
        "--suite",
        "ampleness",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "--fixtures",
        &fixtures_arg(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert!(parsed["summary"]["pass"].as_u64().unwrap() > 0);
}

#[test]
fn env_var_fallback_locates_fixtures() {
    let out = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["run", "--suite", "ampleness"])
        .env("VERIFY_FIXTURES", fixtures())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_fixture_directory_is_exit_2_with_diagnostic() {
    let out = verify(&["run", "--suite", "relations", "--fixtures", "/no/such/dir"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("/no/such/dir"), "{err}");
}

#[test]
fn unknown_suite_is_exit_2() {
    let out = verify(&["run", "--suite", "bogus", "--fixtures", &fixtures_arg()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bogus"));
}

#[test]
fn malformed_fixture_is_exit_2_naming_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["st_basis.poly", "local_basis.poly", "table1.poly", "intersections.tbl"] {
        std::fs::copy(fixtures().join(f), dir.path().join(f)).unwrap();
    }
    // Introduce an undeclared variable in the f1 row (line 6) of table1.poly.
    let path = dir.path().join("table1.poly");
    let body = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, body.replace("f1: -3*z^2*x0*x4", "f1: -3*z^2*x0*x10")).unwrap();
    let out = verify(&["run", "--suite", "relations", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("table1.poly"), "{err}");
    assert!(err.contains(":6:"), "diagnostic should name the line: {err}");
}

#[test]
fn dump_matrices_writes_seven_files() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("mats");
    let out = verify(&[
        "run",
        "--suite",
        "freeness",
        "--fixtures",
        &fixtures_arg(),
        "--dump-matrices",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = std::fs::read_dir(&dump)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names.len(), 7);
    assert!(names.contains(&"mul_x5.txt".to_string()));
}

#[test]
fn text_report_lists_every_selected_suite() {
    let out = verify(&["run", "--suite", "all", "--fixtures", &fixtures_arg()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for suite in ["basis/", "relations/", "freeness/", "fiber/", "ampleness/"] {
        assert!(text.contains(suite), "missing {suite} in:\n{text}");
    }
}
