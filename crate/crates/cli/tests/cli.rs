use std::process::{Command, Output};

use rug::Float;
use serde_json::Value;

fn fig8(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fig8"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strings(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(a) => a.iter().for_each(|v| strings(v, out)),
        Value::Object(m) => m.values().for_each(|v| strings(v, out)),
        _ => {}
    }
}

#[test]
fn numbers_round_trip_at_the_printed_precision() {
    for bits in ["128", "200"] {
        let out = fig8(&["invariants", "--xi", "1.5", "--bits", bits, "--no-timing"]);
        assert!(out.status.success());
        let doc = json(&out);
        let bits: u32 = bits.parse().unwrap();
        let digits = (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        let mut values = Vec::new();
        strings(&doc["data"], &mut values);
        assert!(values.len() > 10);
        for s in values {
            let x = Float::with_val(bits, Float::parse(&s).unwrap());
            assert_eq!(x.to_string_radix(10, Some(digits)), s);
        }
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["rep", "--xi", "1.2", "--root", "minus", "--no-timing"];
    let a = fig8(&args);
    let b = fig8(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let timed = json(&fig8(&["rep", "--xi", "1.2", "--root", "minus"]));
    assert!(timed["meta"]["wall_ms"].is_number());
    assert_eq!(timed["data"], json(&a)["data"]);
}

#[test]
fn geometric_n_lists() {
    let out = fig8(&["jones", "--xi", "0.7", "--N", "8..=128 x2", "--no-timing"]);
    assert!(out.status.success());
    let ns: Vec<u64> = json(&out)["data"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["n"].as_u64().unwrap())
        .collect();
    assert_eq!(ns, [8, 16, 32, 64, 128]);
}

#[test]
fn converge_csv_ends_with_bounded_flag() {
    let out = fig8(&["converge", "--xi", "1.5", "--N", "50,100,200,400", "--format", "csv", "--no-timing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,xi,jones,predictor,ratio,n_times_err");
    assert_eq!(lines.len(), 1 + 4 + 3);
    assert_eq!(*lines.last().unwrap(), "bounded,true");
}

#[test]
fn exit_codes() {
    let usage = fig8(&["jones", "--xi", "1", "--N", "ten"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad_ctx = fig8(&["jones", "--xi", "1", "--N", "5", "--bits", "64", "--tol", "1e-30"]);
    assert_eq!(bad_ctx.status.code(), Some(2));
    assert_eq!(json(&bad_ctx)["error"]["kind"], "usage");
    let bad_theta = fig8(&["qdilog", "--xi", "1.5", "--N", "10", "--theta", "1.4"]);
    assert_eq!(bad_theta.status.code(), Some(2));
    // Below κ the asymptotic study is undefined.
    let numeric = fig8(&["converge", "--xi", "0.5", "--N", "10,20"]);
    assert_eq!(numeric.status.code(), Some(1));
    assert_eq!(json(&numeric)["error"]["kind"], "domain");
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("fig8-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = fig8(&["invariants", "--xi", "2", "--no-timing", "--out", p]);
    assert!(out.status.success() && out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["data"]["T"]["im"], "0");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn qdilog_and_identities() {
    let out = fig8(&["qdilog", "--xi", "1.2", "--N", "16", "--z", "0.3,0.1", "--z", "0.6,-0.15", "--no-timing"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["data"]["points"].as_array().unwrap().len(), 2);
    assert!(doc["meta"]["theta"].is_number());
    let v = json(&fig8(&["verify-identities", "--xi", "1.5", "--N", "10", "--no-timing"]));
    assert_eq!(v["data"]["all_pass"], true);
    assert_eq!(v["data"]["checks"].as_array().unwrap().len(), 4);
}
