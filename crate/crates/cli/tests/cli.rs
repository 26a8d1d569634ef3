use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapsteiner")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mapsteiner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn generated(name: &str) -> (PathBuf, Value) {
    let out = run(&["gen", "--rows", "2", "--cols", "3", "--merge-prob", "0.3", "--terminals", "3", "--seed", "5"]);
    assert!(out.status.success());
    (scratch(name, std::str::from_utf8(&out.stdout).unwrap()), json(&out))
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--seed", "11"]);
    let b = run(&["gen", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["format_version"], 1);
}

#[test]
fn ptas_reports_solution_and_report() {
    let (path, _) = generated("ptas.json");
    let out = run(&["ptas", path.to_str().unwrap(), "--oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let cost = v["solution"]["cost"].as_f64().unwrap();
    assert!(cost <= v["report"]["costs"]["starter"].as_f64().unwrap());
    assert!(v["report"]["opt"].as_f64().unwrap() <= cost);
}

#[test]
fn exact_solvers_agree_through_the_cli() {
    let (path, _) = generated("exact.json");
    let p = path.to_str().unwrap();
    let costs: Vec<f64> = [vec!["solve-exact", p, "--solver", "bruteforce"], vec!["solve-exact", p], vec!["solve-dp", p]]
        .iter()
        .map(|args| json(&run(args))["cost"].as_f64().unwrap())
        .collect();
    assert!(costs.windows(2).all(|w| w[0] == w[1]), "{costs:?}");
}

#[test]
fn default_corpus_check_passes() {
    let out = run(&["check", "--corpus", "default", "--count", "6"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn validate_flags_a_reweighted_vertex() {
    let (_, mut v) = generated("valid.json");
    v["vertices"][0]["weight"] = 7.0.into();
    let path = scratch("corrupt.json", &v.to_string());
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let body = json(&out);
    assert_eq!(body["valid"], false);
    assert!(!body["violations"].as_array().unwrap().is_empty());
}

#[test]
fn bad_input_yields_an_error_body() {
    let (_, mut v) = generated("base.json");
    v["terminals"] = serde_json::json!([987654]);
    let path = scratch("unknown-terminal.json", &v.to_string());
    let out = run(&["ptas", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let body = json(&out);
    assert!(body["error"].is_string());
    assert!(body["infeasible"].is_boolean());
}
