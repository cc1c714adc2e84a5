//! The `macp` binary: outputs and exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_macp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn enumerate_counts_and_headers() {
    let o = run(&["enumerate", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["header"]["count"], 1);
    let v = json(&run(&["enumerate", "--n", "3"]));
    assert_eq!(v["header"]["count"], 13);
    assert_eq!(v["header"]["f_vector"], serde_json::json!([3, 6, 4]));
    assert_eq!(v["elements"].as_array().unwrap().len(), 13);
    let f = json(&run(&["enumerate", "--n", "3", "--flags"]));
    assert_eq!(f["header"]["count"], 60);
    let dot = stdout(&run(&["enumerate", "--n", "3", "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
}

#[test]
fn enumerate_is_deterministic_and_writes_files() {
    let dir = std::env::temp_dir().join(format!("macp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for p in [&a, &b] {
        assert!(run(&["enumerate", "--n", "4", "--out", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "covers", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
    let o = run(&["verify", "thin", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "rp", "--n", "4"]);
    assert_eq!(json(&o)["data"]["betti"], serde_json::json!([1, 1, 1, 1]));
    let text = stdout(&run(&["verify", "rank", "--n", "3", "--format", "text"]));
    assert!(text.starts_with("rank n=3 PASS"));
}

#[test]
fn verify_reports_failures_with_exit_one() {
    let o = run(&["verify", "semimodular", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn om_and_flag() {
    let o = run(&["om", "--matrix", "[[1,0,1],[0,1,1]]"]);
    assert_eq!(stdout(&o).trim(), "n=3;loops=;classes=[+1][+3][+2]");
    let o = run(&["om", "--matrix", r#"[["1/2",0,1],[0,"-3/4",1]]"#]);
    assert!(o.status.success());
    let o = run(&["flag", "--y", "[1,0,1]", "--x", "[[1,0,1],[0,1,1]]"]);
    assert!(stdout(&o).starts_with("flag;z=+0+;M="));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["om", "--matrix", "[[1,0"]).status.code(), Some(3));
    assert_eq!(run(&["om", "--matrix", "[[1,2,3],[2,4,6]]"]).status.code(), Some(4));
    assert_eq!(run(&["flag", "--y", "[1,0,0]", "--x", "[[1,0,1],[0,1,1]]"]).status.code(), Some(4));
    assert_eq!(run(&["enumerate", "--n", "99"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense", "--n", "3"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sample_round_trips() {
    let dir = std::env::temp_dir().join(format!("macp-sample-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("om.txt");
    std::fs::write(&file, "n=3;loops=;classes=[+1][+3][+2]\n").unwrap();
    let o = run(&["sample", "--file", file.to_str().unwrap(), "--count", "5", "--seed", "7"]);
    assert!(o.status.success());
    let mats = json(&o);
    assert_eq!(mats.as_array().unwrap().len(), 5);
    let again = run(&["sample", "--file", file.to_str().unwrap(), "--count", "5", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);
    let o = run(&["sample", "--flag", "flag;z=+0+;M=n=3;loops=;classes=[+1][+3][+2]", "--count", "3"]);
    assert!(o.status.success());
    assert_eq!(json(&o).as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn homology_and_embed() {
    let v = json(&run(&["homology", "--om", "n=3;loops=;classes=[+1][+3][+2]"]));
    assert_eq!(v["betti"], serde_json::json!([1, 1]));
    assert_eq!(v["sphere_check"], true);
    let o = run(&["embed", "--flag", "flag;z=+++;M=n=3;loops=;classes=[+1][+3][+2]"]);
    assert!(stdout(&o).starts_with("n=4;"));
}
