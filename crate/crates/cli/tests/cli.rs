//! End-to-end tests of the binary: exit codes, golden outputs, report
//! determinism and JSON round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lambdak"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    for a in args {
        cmd.arg(a);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_lambda_suite_passes() {
    let out = run(&["verify", "--suite", "lambda", "--r-max", "3", "--d-max", "3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS unit-identity-set1"));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic_bytes() {
    let args = ["verify", "--suite", "gamma", "--seed", "42", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "identical seeds must give identical reports");
}

#[test]
fn verify_json_round_trips() {
    let out = run(&["verify", "--suite", "eta", "--seed", "9", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let re = serde_json::to_string_pretty(&value).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&re).unwrap();
    assert_eq!(value, reparsed, "report must survive a parse/serialize cycle");
    assert_eq!(value["command"], "verify");
    assert!(value["checks"].as_array().map_or(false, |c| !c.is_empty()));
    assert!(value["parameters"]["seed"] == "9");
}

#[test]
fn localize_projective_line() {
    let out = run(&[
        "localize",
        fixture("cp1_om.json").to_str().unwrap(),
        "--m",
        "3",
        "--generic",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("character: 1+g+g^2+g^3"), "{}", text);
    assert!(text.contains("PASS pole-cancellation"));
}

#[test]
fn localize_free_orbit_is_zero() {
    let out = run(&["localize", fixture("free_orbit.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("index: 0"));
}

#[test]
fn localize_excluded_point_exits_3() {
    let out = run(&[
        "localize",
        fixture("cp1_om.json").to_str().unwrap(),
        "--m",
        "3",
        "--at",
        "1/1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn localize_schema_violation_exits_2() {
    let dir = std::env::temp_dir().join("lambdak-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"components\": 3}").unwrap();
    let out = run(&["localize", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // parity violations are mathematical preconditions: exit 3
    let odd = dir.join("odd.json");
    std::fs::write(
        &odd,
        r#"{"components":[{"name":"p","dim":0,"normal":[{"v":1,"rank":1}],"l":0,
            "E":[{"weight":0,"rank":1}]}],"exclude":[]}"#,
    )
    .unwrap();
    let out = run(&["localize", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invert_lambda_denominator_shape() {
    let out = run(&["invert-lambda", "--weights", "1:1,2:1", "--n", "3", "--d", "3", "--generic"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("denominator: (g-1)^4(g^2-1)^4"), "{}", text);
    assert!(text.contains("PASS unit-identity"));
}

#[test]
fn invert_lambda_excluded_point_exits_3() {
    let out = run(&["invert-lambda", "--weights", "2:1", "--at", "1/2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn eta_circle_outputs() {
    let out = run(&["eta-circle", "--k", "2", "--generic"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 1/(1-g^2)"));

    let out = run(&["eta-circle", "--k", "3", "--at", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 1/2"));

    let out = run(&["eta-circle", "--k", "1", "--t", "3/10", "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS oracle-agreement"));
}

#[test]
fn eta_circle_torsion_t_exits_3() {
    let out = run(&["eta-circle", "--k", "3", "--t", "1/3", "--oracle"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reconstruct_round_trip_and_flag() {
    let out = run(&["reconstruct", "--eta-k", "2", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("reconstructed: 1/(1-g^2)"));

    let out = run(&[
        "reconstruct",
        "--plant-num",
        "1",
        "--plant-den",
        "1-g^3",
        "--bound",
        "3",
        "--exclude-orders",
        "1,2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("pole outside A"));
}

#[test]
fn thread_cap_env_is_accepted() {
    let mut cmd = bin();
    cmd.args(["verify", "--suite", "gamma", "--seed", "3"]).env("LAMBDAK_THREADS", "2");
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
