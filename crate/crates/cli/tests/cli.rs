use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pierce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pierce")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pierce-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn gen(args: &[&str], name: &str) -> String {
    let path = scratch(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &p]);
    let out = pierce(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn five_cycle_greedy() {
    let input = gen(&["five-cycle"], "c5.json");
    let cert = json(&pierce(&["pierce", &input, "--method", "greedy"]));
    let c = &cert["certificate"];
    assert!(c["points"].as_array().unwrap().len() <= 3);
    assert_eq!(c["witness"].as_array().unwrap().len(), 2);
    assert_eq!(cert["instance"]["members"].as_array().unwrap().len(), 5);
}

#[test]
fn pairwise_hexagons_need_two_points() {
    let input = gen(&["pairwise", "--base", "hexagon", "--n", "15", "--seed", "4"], "hex.json");
    let cert = json(&pierce(&["pierce", &input, "--method", "hexagon"]));
    assert!(cert["certificate"]["points"].as_array().unwrap().len() <= 2);
}

#[test]
fn certificate_round_trips_through_verify() {
    let input = gen(&["random", "--base", "triangle", "--n", "25", "--kind", "homothets", "--seed", "9"], "tri.json");
    let cert = scratch("tri-cert.json");
    let svg = scratch("tri.svg");
    let out = pierce(&[
        "pierce",
        &input,
        "-o",
        cert.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    let v = json(&pierce(&["verify", cert.to_str().unwrap()]));
    assert_eq!(v["all_pierced"], true);
    assert_eq!(v["members_checked"], 25);
}

#[test]
fn tampered_certificate_fails_verification() {
    let input = gen(&["five-cycle"], "c5-tamper.json");
    let mut cert = json(&pierce(&["pierce", &input]));
    cert["certificate"]["points"].as_array_mut().unwrap().truncate(1);
    let path = scratch("tampered.json");
    std::fs::write(&path, cert.to_string()).unwrap();
    assert_eq!(pierce(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn exact_on_small_and_large_instances() {
    let small = gen(&["nine-triangles", "--epsilon", "1/100"], "nine.json");
    let r = json(&pierce(&["exact", &small]));
    assert_eq!((r["tau"].as_u64(), r["nu"].as_u64()), (Some(3), Some(1)));
    let large = gen(&["random", "--n", "40"], "large.json");
    assert_eq!(pierce(&["exact", &large]).status.code(), Some(3));
}

#[test]
fn bad_input_exits_with_two() {
    let path = scratch("corrupt.json");
    std::fs::write(&path, r#"{"base": {"type": "disk", "center": [0, 0]"#).unwrap();
    assert_eq!(pierce(&["pierce", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, r#"{"base":{"type":"disk","center":[0,0],"radius":1},"kind":"translates","members":[]}"#)
        .unwrap();
    assert_eq!(pierce(&["pierce", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(pierce(&["verify", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn experiment_writes_csv_rows() {
    let csv = scratch("exp.csv");
    let out = pierce(&[
        "experiment",
        "--base",
        "disk",
        "--n-range",
        "5..7",
        "--trials",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("instance,base,kind,method,n,points,witness"));
    assert_eq!(lines.count(), 6);
    assert!(String::from_utf8_lossy(&out.stdout).contains("max_ratio"));
}

#[test]
fn conjecture_log_appends() {
    let log = scratch("conj.jsonl");
    let _ = std::fs::remove_file(&log);
    let args = ["conjecture", "--base", "square", "--trials", "3", "--n-max", "5", "--log", log.to_str().unwrap()];
    let first = json(&pierce(&args));
    assert_eq!(first["counterexamples"], 0);
    let n1 = std::fs::read_to_string(&log).unwrap().lines().count();
    json(&pierce(&args));
    let n2 = std::fs::read_to_string(&log).unwrap().lines().count();
    assert_eq!(n2, 2 * n1);
}

#[test]
fn bench_reports_throughput() {
    let r = json(&pierce(&["bench", "--n", "500", "--base", "square", "--full-verify"]));
    assert_eq!(r["verified"], true);
    assert_eq!(r["members_checked"], 500);
}
