use std::path::Path;
use std::process::{Command, Output};

fn chitchat(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chitchat"));
    cmd.args(args).current_dir(dir);
    for var in ["GENERATOR_URLS", "SCORER_URL", "ARRANGER_SCORER_URL", "RUST_LOG"] {
        cmd.env_remove(var);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = chitchat(dir, args, &[]);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn error_record(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().expect("error line");
    serde_json::from_str(line).unwrap_or_else(|e| panic!("{e}: {stderr}"))
}

fn corpus(dir: &Path) {
    ok(dir, &["synth", "--n", "3", "--out", "raw.json"]);
    ok(dir, &["ingest", "--input", "raw.json", "--out", "corpus.jsonl"]);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(chitchat(dir.path(), &["bogus"], &[]).status.code(), Some(2));
    assert_eq!(chitchat(dir.path(), &["filter", "--corpus", "x"], &[]).status.code(), Some(2));
}

#[test]
fn missing_input_is_a_structured_error() {
    let dir = tempfile::tempdir().unwrap();
    let record = error_record(&chitchat(dir.path(), &["ingest", "--input", "nope.json", "--out", "x.jsonl"], &[]));
    assert_eq!(record["error"]["kind"], "io");
    assert!(record["error"]["chain"].as_array().unwrap().len() >= 2);
    assert!(!dir.path().join("x.jsonl").exists());
}

#[test]
fn environment_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    let out = chitchat(
        dir.path(),
        &["generate", "--corpus", "corpus.jsonl", "--generator-urls", "http://127.0.0.1:8/flag", "--out", "pools.jsonl"],
        &[("GENERATOR_URLS", "http://127.0.0.1:9/env")],
    );
    let record = error_record(&out);
    assert_eq!(record["error"]["kind"], "generation");
    let message = record["error"]["message"].as_str().unwrap();
    assert!(message.contains("/env") && !message.contains("/flag"), "{message}");
}

#[test]
fn artifacts_carry_header_and_config_seed_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    std::fs::write(dir.path().join("run.toml"), "seed = 11\n").unwrap();
    ok(dir.path(), &["--seed", "11", "generate", "--corpus", "corpus.jsonl", "--out", "a.jsonl"]);
    ok(dir.path(), &["--config", "run.toml", "generate", "--corpus", "corpus.jsonl", "--out", "b.jsonl"]);
    let a = std::fs::read_to_string(dir.path().join("a.jsonl")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.jsonl")).unwrap();
    assert_eq!(a, b);
    let header: serde_json::Value = serde_json::from_str(a.lines().next().unwrap()).unwrap();
    assert_eq!(header["header"]["seed"], 11);
    assert_eq!(header["header"]["tool"], "chitchat");
    assert_eq!(header["header"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn filter_keeps_at_most_k_per_dialogue() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    ok(dir.path(), &["generate", "--corpus", "corpus.jsonl", "--out", "pools.jsonl"]);
    ok(dir.path(), &["filter", "--corpus", "corpus.jsonl", "--pools", "pools.jsonl", "--k", "4", "--out", "f.jsonl"]);
    let text = std::fs::read_to_string(dir.path().join("f.jsonl")).unwrap();
    let mut per_dialogue = std::collections::BTreeMap::<String, usize>::new();
    for line in text.lines().skip(1) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        *per_dialogue.entry(v["candidate"]["dialogue_id"].as_str().unwrap().to_string()).or_default() += 1;
    }
    assert_eq!(per_dialogue.len(), 3);
    assert!(per_dialogue.values().all(|&n| n <= 4), "{per_dialogue:?}");
}

#[test]
fn held_lock_refuses_to_write() {
    let dir = tempfile::tempdir().unwrap();
    corpus(dir.path());
    std::fs::write(dir.path().join(".chitchat.lock"), "").unwrap();
    let out = chitchat(dir.path(), &["generate", "--corpus", "corpus.jsonl", "--out", "pools.jsonl"], &[]);
    error_record(&out);
    assert!(!dir.path().join("pools.jsonl").exists());
}
