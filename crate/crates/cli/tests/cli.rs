//! End-to-end runs of the `simulate` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn simulate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simulate")).args(args).env("SIM_THREADS", "2").output().unwrap()
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn rows(out: &Output) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(out.stdout.as_slice()).records().map(|r| r.unwrap()).collect()
}

fn column(out: &Output, name: &str) -> Vec<f64> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let k = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|x| x.unwrap()[k].parse().unwrap()).collect()
}

#[test]
fn theta_sweep_has_33_rows() {
    let out = simulate(&["--sweep", "theta=0:0.1:3.2"]);
    assert!(out.status.success());
    assert_eq!(rows(&out).len(), 33);
}

#[test]
fn hom_check_passes_at_quarter_period() {
    let out = simulate(&["--config", &config("hom.toml"), "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(column(&out, "coincidence").iter().all(|c| *c <= 1e-10));
}

#[test]
fn hom_third_period_gives_one_quarter() {
    let out = simulate(&["--config", &config("hom_pi3.toml"), "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let c = column(&out, "coincidence");
    assert_eq!(c.len(), 1);
    assert!((c[0] - 0.25).abs() < 1e-10, "{}", c[0]);
}

#[test]
fn breach_exits_with_two() {
    let out = simulate(&["--config", &config("hom.toml"), "--sweep", "angle=0.5", "--check"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coincidence"));
    // without --check the same run succeeds
    assert_eq!(simulate(&["--config", &config("hom.toml"), "--sweep", "angle=0.5"]).status.code(), Some(0));
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("single.toml")).unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, text.replace("momentum = -1 }", "momentum = -1, sigma = -0.5 }")).unwrap();
    let out = simulate(&["--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scenario[0].atom.sigma"));

    std::fs::write(&bad, format!("{text}\n[basis2]\nfoo = 1\n")).unwrap();
    let out = simulate(&["--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("basis2"));
}

#[test]
fn out_dir_holds_rows_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = simulate(&["--config", &config("single.toml"), "--out", d, "--format", "jsonl", "--seed", "11", "--sweep", "n_a=1,2,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = std::fs::read_to_string(dir.path().join("rows.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 3);
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    assert_eq!(first["parameter"], "n_a");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 11);
    assert_eq!(report["scenarios"][0]["dropped_v2"].as_array().unwrap().len(), 10);
    assert!(!lines.contains("wall"));
}

#[test]
fn unknown_scenario_is_rejected() {
    let out = simulate(&["--scenario", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_matches_resonant_single_atom() {
    let out = simulate(&["--oracle", "--check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let d = column(&out, "oracle_delta");
    assert!(d[0] < 2e-3, "{}", d[0]);
}
