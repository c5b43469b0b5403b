use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn ramify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn jumps_on_example_file() {
    let out = ramify(&["jumps", problem("example2_p3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["profile"]["U"], json!([{"num": 1, "den": 1}, {"num": 4, "den": 1}, {"num": 13, "den": 3}]));
}

#[test]
fn verify_reports_agreement() {
    let out = ramify(&["verify", problem("example2_p3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["all_match"], json!(true));
    assert_eq!(v["checks"][0]["oracle"], json!({"num": 13, "den": 3}));
    let out = ramify(&["verify", problem("zero_top_p3.json").to_str().unwrap()]);
    assert_eq!(stdout_json(&out)["checks"][0]["formula"], json!({"num": 5, "den": 1}));
}

#[test]
fn output_is_deterministic() {
    let path = problem("unreduced_p3.json");
    let first = ramify(&["jumps", path.to_str().unwrap()]);
    let second = ramify(&["jumps", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout);
    let s1 = ramify(&["selftest", "--p", "3", "--n", "2", "--count", "20", "--seed", "5"]);
    let s2 = ramify(&["selftest", "--p", "3", "--n", "2", "--count", "20", "--seed", "5"]);
    assert_eq!(s1.stdout, s2.stdout);
    assert_eq!(stdout_json(&s1)["fail"], json!(0));
}

#[test]
fn normalize_round_trips_through_jumps() {
    let path = problem("unreduced_p3.json");
    let normalized = ramify(&["normalize", path.to_str().unwrap()]);
    assert_eq!(normalized.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("ramify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let again = dir.join("normalized.json");
    std::fs::write(&again, &normalized.stdout).unwrap();
    let direct = stdout_json(&ramify(&["jumps", path.to_str().unwrap()]));
    let via = stdout_json(&ramify(&["jumps", again.to_str().unwrap()]));
    assert_eq!(direct["profile"], via["profile"]);
    assert_eq!(via["changed"], json!(false));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let out = ramify(&["jumps", problem("degenerate_p3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], json!("DegenerateGroup"));
    assert!(!out.stderr.is_empty());

    let dir = std::env::temp_dir().join(format!("ramify-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"p\": 3, \"d\": 1,\n \"modulus\": [0, 1], \"n\": }").unwrap();
    let out = ramify(&["jumps", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout_json(&out)["error"]["code"], json!("ParseError"));
    std::fs::remove_dir_all(dir).unwrap();

    let out = ramify(&["jumps", problem("example2_p3.json").to_str().unwrap(), "--precision", "0"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn pretty_flag_changes_layout_only() {
    let path = problem("example2_p3.json");
    let plain = stdout_json(&ramify(&["jumps", path.to_str().unwrap()]));
    let pretty = ramify(&["jumps", "--pretty", path.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&pretty.stdout).contains("\n  "));
    assert_eq!(stdout_json(&pretty), plain);
}
