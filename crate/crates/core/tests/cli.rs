use std::process::{Command, Output};

use serde_json::Value;

use toric_verify::cli::ConstructOutput;
use toric_verify::family::construct;

const TOY: &[&str] = &["--n", "3", "--p", "3", "--l", "1", "--a", "2", "--d", "1", "--b", "0", "--c", "1"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-verify"))
        .args(args)
        .env_remove("TORIC_VERIFY_BUDGET")
        .output()
        .expect("binary runs")
}

fn with_toy(cmd: &[&str], extra: &[&str]) -> Output {
    let mut v = cmd.to_vec();
    v.extend_from_slice(TOY);
    v.extend_from_slice(extra);
    run(&v)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn construct_emits_the_systems() {
    let o = with_toy(&["construct"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: ConstructOutput = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(parsed.system, construct(&parsed.manifest.params).unwrap());
    let v = json(&o);
    let f: Vec<&str> = v["system"]["F"].as_array().unwrap().iter().map(|b| b["label"].as_str().unwrap()).collect();
    assert_eq!(f, ["F1", "F2", "F3"]);
    assert_eq!(v["system"]["H"][0]["binomial"]["plus"]["y1"], 1);
    assert_eq!(v["system"]["H"][0]["binomial"]["plus"]["y3"], 2);
}

#[test]
fn construct_text_format() {
    let o = with_toy(&["construct"], &["--format", "text"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s, "F1 = y1^3 - x2\nF2 = y2^2 - x3\nF3 = y3^3 - x2*x3*y2\nH1 = y1*y3^2 - x2*x3\n");
}

#[test]
fn bad_parameters_exit_2() {
    let o = run(&["construct", "--n", "3", "--p", "3", "--l", "1", "--a", "2", "--d", "4", "--b", "0", "--c", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("condition (II)"));
    assert_eq!(run(&["verify", "--n", "3"]).status.code(), Some(2));
    let o = with_toy(&["verify"], &["--mode", "witnesses", "--q", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_char_p() {
    let o = run(&[
        "verify", "--n", "3", "--p", "3", "--l", "2", "--a", "3", "--d", "1", "--b", "0", "--c", "1", "--mode",
        "char-p", "--k", "1,2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["manifest"]["fields"], serde_json::json!([[3, 1], [3, 2]]));
    assert_eq!(v["manifest"]["budget"], 100_000_000u64);
    assert_eq!(v["result"]["mode"], "char-p");
}

#[test]
fn verify_witnesses_prints_certificate() {
    let o = with_toy(&["verify"], &["--mode", "witnesses", "--q", "7", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("point (1, 1, 1, 2, 1, 1)"));
    assert!(s.contains("NotInV"));
}

#[test]
fn verify_char_other_q2() {
    let dir = std::env::temp_dir().join(format!("toric-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let o = with_toy(&["verify"], &["--mode", "char-other", "--q", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["not_in_v"], 0);
    assert_eq!(v["manifest"]["outputs"][0], out.to_str().unwrap());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn budget_from_environment() {
    let mut v = vec!["verify"];
    v.extend_from_slice(TOY);
    v.extend_from_slice(&["--mode", "char-other", "--q", "7"]);
    let o = Command::new(env!("CARGO_BIN_EXE_toric-verify"))
        .args(&v)
        .env("TORIC_VERIFY_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn failing_pair_witness_exits_1() {
    // The Bezout exponents put this pair point on the variety.
    let args = ["--n", "4", "--p", "7", "--l", "1", "--a", "2", "--d", "5", "--b", "1,1", "--c", "3,5"];
    let mut v = vec!["verify"];
    v.extend_from_slice(&args);
    v.extend_from_slice(&["--mode", "witnesses", "--q", "29"]);
    assert_eq!(run(&v).status.code(), Some(1));
    v.extend_from_slice(&["--pair-exponents", "swapped"]);
    assert_eq!(run(&v).status.code(), Some(0));
}

#[test]
fn report_ranges() {
    let o = run(&["report", "--n", "6", "--p", "2", "--l", "1", "--a", "1", "--d", "1", "--b", "1,1,1,1", "--c", "1,1,1,1"]);
    let v = json(&o);
    assert_eq!(v["report"]["bar_char_other"], 16);
    assert_eq!(v["report"]["ara_other_low"], 10);
    assert_eq!(v["report"]["ara_other_high"], 12);
    assert_eq!(v["report"]["ara_other_exact"], Value::Null);
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v["result"]["timings"] = Value::Null;
        v
    };
    let a = strip(json(&with_toy(&["verify"], &["--mode", "char-other", "--q", "7", "--jobs", "1"])));
    let b = strip(json(&with_toy(&["verify"], &["--mode", "char-other", "--q", "7", "--jobs", "3"])));
    assert_eq!(a["result"], b["result"]);
}
