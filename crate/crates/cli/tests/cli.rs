use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxtsp"))
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("maxtsp-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_verify() {
    let d = scratch("flow");
    let inst = d.join("a.txt");
    let cert = d.join("a.json");
    let o = run(&["gen", "--family", "kite_heavy", "--n", "10", "--seed", "2", "-o", path(&inst)]);
    assert!(o.status.success());
    let o = run(&["solve", path(&inst), "--certificate", path(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("weight "));
    assert!(out.contains("\nratio "));
    let o = run(&["verify", path(&inst), path(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("pass ")));
    let o = run(&["oracle", path(&inst)]);
    assert!(stdout(&o).starts_with("opt "));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn gen_to_stdout_matches_file() {
    let d = scratch("gen");
    let inst = d.join("b.txt");
    run(&["gen", "--family", "metric_euclidean", "--n", "7", "--seed", "5", "-o", path(&inst)]);
    let o = run(&["gen", "--family", "metric_euclidean", "--n", "7", "--seed", "5"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(&inst).unwrap());
    assert!(stdout(&o).starts_with("maxtsp 1\n7\n"));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn certificates_are_byte_identical() {
    let d = scratch("det");
    let inst = d.join("c.txt");
    run(&["gen", "--family", "uniform_random", "--n", "9", "--seed", "1", "-o", path(&inst)]);
    let (a, b) = (d.join("1.json"), d.join("2.json"));
    assert!(run(&["solve", path(&inst), "--certificate", path(&a)]).status.success());
    assert!(run(&["solve", path(&inst), "--certificate", path(&b)]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn tampered_certificate_fails_with_one() {
    let d = scratch("tamper");
    let inst = d.join("d.txt");
    let cert = d.join("d.json");
    run(&["gen", "--family", "uniform_random", "--n", "8", "--seed", "3", "-o", path(&inst)]);
    run(&["solve", path(&inst), "--certificate", path(&cert)]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let w = v["weight"].as_i64().unwrap();
    v["weight"] = serde_json::json!(w + 1);
    std::fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(&["verify", path(&inst), path(&cert)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL tour weight"));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn bad_input_exits_with_two() {
    let d = scratch("bad");
    let inst = d.join("e.txt");
    std::fs::write(&inst, "maxtsp 1\n4\n1 2 3\n").unwrap();
    assert_eq!(run(&["solve", path(&inst)]).status.code(), Some(2));
    std::fs::write(&inst, "maxtsp 1\n4\n1 2 3 4 5 -6\n").unwrap();
    assert_eq!(run(&["solve", path(&inst)]).status.code(), Some(2));
    assert_eq!(run(&["solve", path(&d.join("missing.txt"))]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--family", "nope", "--n", "6"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--seeds", "5..2"]).status.code(), Some(2));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn oracle_refuses_large_instances() {
    let d = scratch("big");
    let inst = d.join("f.txt");
    run(&["gen", "--family", "uniform_random", "--n", "19", "-o", path(&inst)]);
    assert_eq!(run(&["oracle", path(&inst)]).status.code(), Some(2));
    assert_eq!(run(&["solve", path(&inst)]).status.code(), Some(0));
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn bench_prints_a_row_per_cell() {
    let d = scratch("bench");
    let json = d.join("bench.json");
    let o = run(&[
        "bench", "--families", "uniform_random,kite_heavy", "--sizes", "6,7", "--seeds", "0..3", "--parallel", "2", "--json",
        path(&json),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 16);
    std::fs::remove_dir_all(&d).unwrap();
}
