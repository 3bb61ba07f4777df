use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualhash"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn modified_toeplitz_is_exactly_universal_and_dual() {
    let v = json(&["analyze", "--kind", "modified-toeplitz", "-n", "8", "-m", "3", "--exact"]);
    assert_eq!(v["epsilon"], "1");
    assert_eq!(v["dual_epsilon"], "1");
    assert_eq!(v["family_size"], 128);
}

#[test]
fn noiseless_reliability_is_one_minus_rate() {
    let v = json(&["bounds", "reliability", "-R", "0.5", "-p", "0"]);
    assert_eq!(v["exponent"].as_f64(), Some(0.5));
}

#[test]
fn repetition_code_error_is_exact() {
    // majority vote fails on >= 2 flips: 3p²(1−p) + p³ at p = 1/10
    let v = json(&["simulate", "error-prob", "--code", "rep:3", "-p", "1/10"]);
    assert_eq!(v["exact_value"], "7/250");
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "all", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 9);
}

#[test]
fn sampling_without_seed_is_a_usage_error() {
    assert_eq!(run(&["verify", "all"]).status.code(), Some(2));
    let mc = run(&["analyze", "--kind", "random-linear", "-n", "6", "-m", "2", "--mc"]);
    assert_eq!(mc.status.code(), Some(2));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--kind", "toeplitz", "-n", "4", "-m", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "12", "--seed", "1"]).status.code(), Some(2));
    // C2 = rep:3 is not inside the even-weight code
    let nested = run(&["simulate", "wiretap", "--channel", "0.9 0 0.1 0", "--c1", "even:3", "--c2", "rep:3"]);
    assert_eq!(nested.status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["analyze", "--kind", "toeplitz", "-n", "10", "-m", "4", "--mc", "--samples", "300", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);

    let fam = ["simulate", "family", "--kind", "random-linear", "-n", "10", "-m", "5", "-p", "1/20", "--mc", "--samples", "50", "--seed", "3"];
    assert_eq!(run(&fam).stdout, run(&fam).stdout);
}

#[test]
fn sweeps_emit_csv() {
    let out = run(&["sweep", "reliability", "-p", "0.05", "--steps", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("R,exponent,identity_residual,p,s_opt"));
    assert_eq!(lines.count(), 5);

    let qkd = run(&["sweep", "qkd", "--p-ph", "0.05", "--n", "100,1000"]);
    let text = String::from_utf8(qkd.stdout).unwrap();
    assert!(text.starts_with("formula_id,"));
    assert!(text.lines().any(|l| l.starts_with("phase_iid_trace,")));
}

#[test]
fn noiseless_wiretap_leaks_nothing() {
    let v = json(&["simulate", "wiretap", "--channel", "1 0 0 0", "--c1", "full:3", "--c2", "rep:3"]);
    assert_eq!(v["trace"]["value"].as_f64(), Some(0.0));
    assert_eq!(v["holevo"]["value"].as_f64(), Some(0.0));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("dualhash-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ratio.json");
    let out = run(&["bounds", "ratio", "-n", "10", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // 2^{3/2} / (4 + √11) at ε = 1
    let want = 2f64.powf(1.5) / (4.0 + 11f64.sqrt());
    assert!((v["ratio"].as_f64().unwrap() - want).abs() < 1e-11);
    std::fs::remove_dir_all(dir).ok();
}
