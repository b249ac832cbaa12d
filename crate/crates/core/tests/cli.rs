use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn approachkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_approachkit")).args(args).output().expect("binary runs")
}

fn document(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dual_check_exit_codes_follow_the_verdict() {
    let game = data("ce1.json");
    let target = data("orth00.json");
    let args = |m: &'static str| {
        vec!["check-dual", "--game", game.to_str().unwrap(), "--target", target.to_str().unwrap(), "--monitoring", m]
    };

    let full = approachkit(&args("full"));
    assert_eq!(full.status.code(), Some(0));
    assert_eq!(document(&full)["not_approachable"], Value::Bool(false));

    let dark = approachkit(&args("dark"));
    assert_eq!(dark.status.code(), Some(2));
    let doc = document(&dark);
    assert_eq!(doc["result"]["verdict"], "NotApproachable");
    assert_eq!(doc["result"]["counter_y"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"payoffs\": [ ").unwrap();
    let out = approachkit(&["check-dual", "--game", bad.to_str().unwrap(), "--target", data("orth00.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn simulate_writes_artifacts_named_by_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out = approachkit(&[
        "simulate",
        "--game",
        data("ce1.json").to_str().unwrap(),
        "--target",
        data("orth00.json").to_str().unwrap(),
        "--horizon",
        "500",
        "--replications",
        "3",
        "--seed",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = document(&out);
    let hash = doc["config_hash"].as_str().unwrap().to_string();
    assert_eq!(hash.len(), 64);

    let files: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(files.iter().any(|f| f == &format!("simulate-{}.json", &hash[..12])), "{files:?}");
    let csv = files.iter().find(|f| f.ends_with(".csv")).expect("a CSV table");
    let text = std::fs::read_to_string(dir.path().join(csv)).unwrap();
    assert!(text.starts_with(&format!("# config_hash: {hash}\n# config: ")), "{text}");

    let again = approachkit(&[
        "simulate",
        "--game",
        data("ce1.json").to_str().unwrap(),
        "--target",
        data("orth00.json").to_str().unwrap(),
        "--horizon",
        "500",
        "--replications",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(document(&again)["result"], doc["result"]);
}

#[test]
fn lift_reports_the_hidden_halfspace() {
    let out = approachkit(&[
        "lift",
        "--game",
        data("hidden.json").to_str().unwrap(),
        "--target",
        data("interval.json").to_str().unwrap(),
        "--monitoring",
        "dark",
        "--q",
        "0.5,0.5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"consistent\": false"), "{text}");
}
