use std::collections::HashMap;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn specht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specht"))
        .args(args)
        .env_remove("SPECHT_REWRITE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON value")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Record lines only, as raw text.
fn record_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.contains("\"summary\""))
        .map(|l| format!("{l}\n"))
        .collect()
}

#[test]
fn classify_examples() {
    let out = specht(&["classify", "4,4,2", "--char", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = stdout_json(&out);
    assert_eq!(rec["verdict"], "reducible");
    assert_eq!(rec["witnesses"], json!(["MH", "LLT", "Inductive:1"]));
    assert_eq!(rec["partition"], json!([4, 4, 2]));
    assert_eq!(rec["n"], 10);

    let rec = stdout_json(&specht(&["classify", "4,1"]));
    assert_eq!(rec["verdict"], "irreducible");
    assert_eq!(rec["class"], "2-regular");

    assert_eq!(specht(&["classify", "2,3"]).status.code(), Some(2));
    assert_eq!(specht(&["classify", "3,x"]).status.code(), Some(2));
    assert_eq!(specht(&["classify", "4,4,2", "--char", "4"]).status.code(), Some(2));
}

#[test]
fn classify_output_has_sorted_keys() {
    let out = specht(&["classify", "3,2^3", "--witnesses"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Map<String, Value> = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.keys().collect();
    let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\":")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    assert!(v.contains_key("details"));
}

#[test]
fn survey_counts_and_order() {
    let out = specht(&["survey", "0"]);
    let l = lines(&out);
    assert_eq!(l.len(), 2);
    assert_eq!(l[0]["partition"], json!([]));
    assert_eq!(l[0]["verdict"], "irreducible");

    let l = lines(&specht(&["survey", "4"]));
    assert_eq!(l.len(), 6);
    let parts: Vec<Value> = l[..5].iter().map(|r| r["partition"].clone()).collect();
    assert_eq!(parts, vec![json!([4]), json!([3, 1]), json!([2, 2]), json!([2, 1, 1]), json!([1, 1, 1, 1])]);
    assert_eq!(l[5]["summary"]["records"], 5);
}

#[test]
fn survey_ten_is_conjugation_symmetric() {
    let l = lines(&specht(&["survey", "10"]));
    assert_eq!(l.len(), 43);
    let verdicts: HashMap<Vec<u64>, String> = l[..42]
        .iter()
        .map(|r| {
            let p: Vec<u64> = serde_json::from_value(r["partition"].clone()).unwrap();
            (p, r["verdict"].as_str().unwrap().to_owned())
        })
        .collect();
    for (p, v) in &verdicts {
        let conj: Vec<u64> = (1..=p[0]).map(|k| p.iter().filter(|&&x| x >= k).count() as u64).collect();
        assert_eq!(&verdicts[&conj], v, "{p:?}");
    }
    let total: u64 = l[42]["summary"]["verdicts"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 42);
}

#[test]
fn survey_cache_is_sound_and_append_only() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let cache_s = cache.to_str().unwrap();
    let cold = specht(&["survey", "12", "--cache", cache_s]);
    assert_eq!(cold.status.code(), Some(0));
    let first = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(first.lines().count(), 77);

    let warm = specht(&["survey", "12", "--cache", cache_s]);
    assert_eq!(record_text(&cold), record_text(&warm));
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), first);

    // A damaged line is skipped with a warning and the records do not change.
    std::fs::write(&cache, format!("{{not json\n{first}")).unwrap();
    let damaged = specht(&["survey", "12", "--cache", cache_s]);
    assert_eq!(damaged.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&damaged.stderr).contains("skipping cache line 1"));
    assert_eq!(record_text(&cold), record_text(&damaged));

    // Growing the survey only appends.
    specht(&["survey", "13", "--cache", cache_s]);
    let grown = std::fs::read_to_string(&cache).unwrap();
    assert!(grown.starts_with(&format!("{{not json\n{first}")));
    assert_eq!(grown.lines().count(), 1 + 77 + 101);
}

#[test]
fn survey_reports_unwritable_cache_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let out = specht(&["survey", "5", "--cache", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out).len(), 8);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn verify_mainhom_examples() {
    let out = specht(&["verify-mainhom", "--s", "3", "--sp", "3", "--f", "0", "--g", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    for key in ["params", "mu", "lambda", "support_size", "nonzero", "pairs_checked", "pairs_failed", "elapsed_ms"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert_eq!(r["nonzero"], true);
    assert_eq!(r["pairs_failed"], json!([]));
    assert_eq!(r["mu"], json!([6, 6, 5]));
    assert_eq!(r["lambda"], json!([5, 5, 5, 2]));

    let bad = |s: &str, sp: &str, f: &str| specht(&["verify-mainhom", "--s", s, "--sp", sp, "--f", f, "--g", "2"]);
    assert_eq!(bad("4", "4", "0").status.code(), Some(2));
    assert_eq!(bad("2", "4", "1").status.code(), Some(2));
}

#[test]
fn verify_mainhom_with_cancellations() {
    let out = specht(&["verify-mainhom", "--s", "3", "--sp", "3", "--f", "1", "--g", "2", "--cancellations"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    let c = r["cancellations"].as_object().unwrap();
    assert!(c.contains_key("middle") && c.contains_key("middle2") && c.contains_key("topcory"));
    assert!(c.values().all(|v| v["failed"] == 0));
}

#[test]
fn budget_flag_and_environment() {
    let args = ["verify-mainhom", "--s", "5", "--sp", "5", "--f", "0", "--g", "2"];
    let mut with_flag = args.to_vec();
    with_flag.extend(["--budget", "1"]);
    assert_eq!(specht(&with_flag).status.code(), Some(1));

    let run_env = |value: &str, extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_specht"))
            .args(args)
            .args(extra)
            .env("SPECHT_REWRITE_BUDGET", value)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run_env("1", &[]), Some(1));
    assert_eq!(run_env("1", &["--budget", "1000000"]), Some(0));
    assert_eq!(run_env("lots", &[]), Some(2));
}

#[test]
fn small_commands() {
    let out = specht(&["nstat", "13,12^5,7,4,3", "13,12,11,10,9,8,7,2,1"]);
    assert_eq!(stdout_json(&out), json!(10));
    assert_eq!(specht(&["nstat", "3,2", "4,1"]).status.code(), Some(2));

    assert_eq!(stdout_json(&specht(&["regularize", "3,2^3"])), json!([5, 3, 1]));
    assert_eq!(specht(&["regularize", "0,1"]).status.code(), Some(2));

    let dim = stdout_json(&specht(&["homdim", "6,6,5", "5,5,5,2"])).as_u64().unwrap();
    assert!(dim >= 1);
    assert_eq!(specht(&["homdim", "3", "2"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(specht(&[]).status.code(), Some(2));
    assert_eq!(specht(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(specht(&["survey", "-1"]).status.code(), Some(2));
    assert_eq!(specht(&["--help"]).status.code(), Some(0));
}
