use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_semprobe");
const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

fn semprobe(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SEMPROBE_CACHE").output().unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&out.stderr)))
}

fn write_config(dir: &Path, criteria: &str) -> String {
    let path = dir.join("exp.json");
    let body = format!(
        r#"{{"datasets": [{{"id": "paws_wiki", "path": "{FIXTURES}/corpus/pairs_paws.tsv", "format": "paws_tsv",
                          "sample": {{"pairs_per_label": 40}}}}],
            "encoders": [{{"encoder_id": "m", "kind": {{"type": "mock", "dim": 64, "seed": 3}}}}],
            "criteria": {criteria}, "output_dir": "out", "wordnet_dir": "{FIXTURES}/wordnet"}}"#
    );
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_then_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"["c1", "c3"]"#);
    let out = semprobe(&["run", "--config", &cfg, "--set", "master_seed=4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["reports"], 2);
    let dir = tmp.path().join("out");
    assert!(dir.join("figures/c3__m__paws_wiki.svg").is_file());
    let before = fs::read(dir.join("table_c1.csv")).unwrap();
    fs::remove_file(dir.join("table_c1.csv")).unwrap();
    let out = semprobe(&["report", "--from", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(dir.join("table_c1.csv")).unwrap(), before);
}

#[test]
fn cache_env_var_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"["c1"]"#);
    let cache = tmp.path().join("env-cache.jsonl");
    let out = Command::new(BIN)
        .args(["run", "--config", &cfg])
        .env("SEMPROBE_CACHE", &cache)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(fs::read_to_string(&cache).unwrap().lines().count() > 0);
}

#[test]
fn exit_codes_follow_error_class() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[]");
    let out = semprobe(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "config");

    let cfg = write_config(tmp.path(), r#"["c1"]"#);
    let out = semprobe(&["run", "--config", &cfg, "--set", "datasets.0.path=nowhere.tsv"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "data");

    let backend = r#"{"encoder_id": "x", "kind": {"type": "subprocess", "command": ["/nonexistent/enc"]}}"#;
    let out = semprobe(&["run", "--config", &cfg, "--set", &format!("encoders.0={backend}")]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "backend");
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn perturb_writes_records() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.jsonl");
    fs::write(
        &input,
        "{\"id\": \"a\", \"text\": \"Levin's attorney, Bo Hitchcock, declined to comment last Friday\"}\n\
         {\"id\": \"b\", \"text\": \"it is\"}\n",
    )
    .unwrap();
    let output = tmp.path().join("out.jsonl");
    let wordnet = format!("{FIXTURES}/wordnet");
    let out = semprobe(&[
        "perturb", "--kind", "synonym", "--n", "1", "--in", input.to_str().unwrap(),
        "--out", output.to_str().unwrap(), "--wordnet", &wordnet, "--seed", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary, serde_json::json!({"written": 1, "skipped": 1}));
    let line: Value = serde_json::from_str(fs::read_to_string(&output).unwrap().trim()).unwrap();
    assert_eq!(line["id"], "a");
    assert_eq!(line["kind"], "synonym");
    assert_eq!(line["trace"].as_array().unwrap().len(), 1);

    let out = semprobe(&[
        "perturb", "--kind", "antonym", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_fills_cache_and_probe_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in.jsonl");
    fs::write(&input, "{\"id\": \"a\", \"text\": \"one\"}\n{\"id\": \"b\", \"text\": \"two\"}\n").unwrap();
    let cache = tmp.path().join("c.jsonl");
    let backend = r#"{"encoder_id": "m", "kind": {"type": "mock", "dim": 8, "seed": 1}}"#;
    let out = semprobe(&["encode", "--backend", backend, "--in", input.to_str().unwrap(), "--cache", cache.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<Value> = out.stdout.split(|&b| b == b'\n').filter(|l| !l.is_empty()).map(|l| serde_json::from_slice(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1]["vector"].as_array().unwrap().len(), 8);
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 2);

    // The cache alone now serves those texts; anything else is a backend miss.
    let cached = format!(r#"{{"encoder_id": "m", "kind": {{"type": "cache_file", "path": "{}"}}}}"#, cache.display());
    let out = semprobe(&["encode", "--backend", &cached, "--in", input.to_str().unwrap()]);
    assert!(out.status.success());

    let data = format!("{FIXTURES}/probe/mr_fixture.tsv");
    let backend = r#"{"encoder_id": "m", "kind": {"type": "mock", "dim": 256, "seed": 1}}"#;
    let out = semprobe(&["probe", "--task", "MR", "--data", &data, "--backend", backend, "--lambdas", "0.01,1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let result: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(result["fold_accuracies"].as_array().unwrap().len(), 10);
    assert!(result["mean_accuracy"].as_f64().unwrap() > 0.9);
}
