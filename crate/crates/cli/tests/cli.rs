use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const INSTANCE_A: &str = r#"{
  "items": [{"id": 0, "price": 0.5}, {"id": 1, "price": 1.5}],
  "valuation": {"kind": "additive_k_demand", "values": [1, 2], "k": 1},
  "distribution": {"kind": "uniform", "low": 0, "high": 2}
}"#;

fn assort(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_assort")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn brute_and_dp_agree_on_instance_a() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", INSTANCE_A);
    for algo in ["brute", "dp"] {
        let doc = json_of(&assort(&["solve", &a, "--algo", algo]));
        assert_eq!(doc["assortment"], serde_json::json!([1]));
        assert_eq!(num(&doc["value"]), 0.9375);
    }
}

#[test]
fn evaluate_explains_the_frontier() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", INSTANCE_A);
    let doc = json_of(&assort(&["evaluate", &a, "--set", "0,1", "--explain"]));
    assert_eq!(num(&doc["revenue"]), 0.875);
    let f = &doc["frontier"];
    let bps: Vec<f64> = f["breakpoints"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(bps, [0.5, 1.0]);
    let prices: Vec<f64> = f["options"].as_array().unwrap().iter().map(|o| num(&o["price"])).collect();
    assert_eq!(prices, [0.0, 0.5, 1.5]);
}

#[test]
fn empty_set_earns_nothing() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", INSTANCE_A);
    let doc = json_of(&assort(&["evaluate", &a, "--set", ""]));
    assert_eq!(num(&doc["revenue"]), 0.0);
    assert_eq!(num(&doc["welfare"]), 0.0);
}

#[test]
fn exit_codes_separate_refusals_from_bad_input() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", INSTANCE_A);
    let xos = write(
        &dir,
        "xos.json",
        r#"{"items": [{"id": 0, "price": 1}, {"id": 1, "price": 1}],
            "valuation": {"kind": "xos", "clauses": [[1, 2], [2, 1]]},
            "distribution": {"kind": "uniform", "low": 0, "high": 2}}"#,
    );
    let bad = write(&dir, "bad.json", "{\"items\": [");

    assert_eq!(assort(&["solve", &a, "--algo", "brute"]).status.code(), Some(0));
    assert_eq!(assort(&["solve", &xos, "--algo", "dp"]).status.code(), Some(2));
    let refused = assort(&["solve", &a, "--algo", "show-all"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("not well-priced"));
    assert_eq!(assort(&["solve", &bad, "--algo", "brute"]).status.code(), Some(1));
    assert_eq!(assort(&["evaluate", &a, "--set", "7"]).status.code(), Some(1));
}

fn without_wall_time(out: &Output) -> Value {
    let mut doc = json_of(out);
    doc.as_object_mut().unwrap().remove("wall_ms");
    doc
}

#[test]
fn gen_then_solve_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let mut runs = Vec::new();
    for name in ["one.json", "two.json"] {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let gen = assort(&["gen", "--family", "random", "--n", "6", "--k", "2", "--seed", "11", "--out", p]);
        assert!(gen.status.success());
        let solved = assort(&["solve", p, "--algo", "dp"]);
        runs.push((fs::read(Path::new(p)).unwrap(), solved.stdout.clone(), without_wall_time(&solved)));
    }
    assert_eq!(runs[0].0, runs[1].0);
    assert_eq!(runs[0].2, runs[1].2);
    let text =
        |b: &[u8]| String::from_utf8_lossy(b).lines().filter(|l| !l.contains("wall_ms")).collect::<Vec<_>>().join("\n");
    assert_eq!(text(&runs[0].1), text(&runs[1].1));
}

#[test]
fn bench_dp_matches_brute_force() {
    let out =
        assort(&["bench", "--family", "random", "--n", "6", "--k", "2", "--trials", "200", "--algos", "dp,brute"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,k,algo,value,oracle,ratio,wall_ms"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 400);
    for row in rows {
        let ratio: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
        assert_eq!(ratio, 1.0, "{row}");
    }
}

#[test]
fn learn_recovers_the_best_item_of_instance_a() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", INSTANCE_A);
    let doc = json_of(&assort(&["learn", "--hidden", &a, "--k", "1", "--epsilon", "0.02", "--seed", "3", "--reveal"]));
    assert_eq!(doc["assortment"], serde_json::json!([1]));
    assert!((num(&doc["true_value"]) - 0.9375).abs() <= 0.02 * 1.5);
}
