use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_budget-graph"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error(out: &Output) -> (i32, Value) {
    let body = serde_json::from_slice(&out.stderr).unwrap();
    (out.status.code().unwrap(), body)
}

const CASE_B: &str = r#"{"edges": [
    {"u": "r", "v": "v", "len": 1},
    {"u": "v", "v": "a", "len": 1},
    {"u": "v", "v": "b", "len": 1}
]}"#;

#[test]
fn case_b_radius() {
    let f = Fixture::new();
    let input = f.file("caseB.json", CASE_B);
    let v = json(&run(&["radius", "--input", s(&input), "--root", "r"]));
    let r = v["radius"].as_f64().unwrap();
    assert!((r - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    assert_eq!(v["root"], "r");
    let leaf = v["allocation"]["fractions"]["a-v"].as_f64().unwrap();
    assert!((leaf - 0.293).abs() < 1e-3);
}

#[test]
fn budget_rescales_objectives() {
    let f = Fixture::new();
    let input = f.file("caseB.json", CASE_B);
    let v = json(&run(&["radius", "--input", s(&input), "--root", "r", "--budget", "4"]));
    let r = v["radius"].as_f64().unwrap();
    assert!((r - (3.0 + 2.0 * 2f64.sqrt()) / 4.0).abs() < 1e-12);
    assert_eq!(v["allocation"]["budget"], 4.0);
}

#[test]
fn path_all_roots_csv() {
    let f = Fixture::new();
    let input = f.file("path3.txt", "a b 1\nb c 1\n");
    let out = run(&["radius", "--all-roots", "--input", s(&input), "--csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "vertex,BR\na,4\nb,2\nc,4\n");
    let out = run(&["median", "--all-roots", "--input", s(&input), "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("vertex,BM,sum,average\n"));
    assert!(text.contains("\nb,4,4,"));
}

#[test]
fn eval_reproduces_thirds_and_round_trips() {
    let f = Fixture::new();
    let input = f.file("caseB.json", CASE_B);
    let third = f.file(
        "third.json",
        r#"{"budget": 1, "fractions": {"r-v": 0.3333333333333333, "a-v": 0.3333333333333333, "b-v": 0.3333333333333334}}"#,
    );
    let v = json(&run(&["eval", "--input", s(&input), "--allocation", s(&third), "--root", "r"]));
    assert!((v["radius"].as_f64().unwrap() - 6.0).abs() < 1e-12);

    // a solver report is itself a valid allocation file
    let report = f.path("report.json");
    let solved = run(&["median", "--input", s(&input), "--root", "r", "--output", s(&report)]);
    assert!(solved.status.success());
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let v = json(&run(&["eval", "--input", s(&input), "--allocation", s(&report), "--root", "r"]));
    let (a, b) = (v["sum"].as_f64().unwrap(), rep["sum"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-9 * b);
}

#[test]
fn oracle_and_enumeration_agree_on_triangle() {
    let f = Fixture::new();
    let input = f.file("tri.txt", "r a 1\nr b 1\na b 1\n");
    let num = json(&run(&["oracle", "radius", "--input", s(&input), "--root", "r"]));
    let exact = json(&run(&["oracle", "radius", "--input", s(&input), "--root", "r", "--exact-enum"]));
    assert_eq!(exact["spanning_trees"], 3);
    let (x, y) = (num["radius"].as_f64().unwrap(), exact["radius"].as_f64().unwrap());
    assert!((x - 2.0).abs() < 1e-4 && (y - 2.0).abs() < 1e-12);
    assert_eq!(num["method"], "numeric");
    assert!(num["converged"].is_boolean());
}

#[test]
fn identical_runs_are_byte_identical() {
    let f = Fixture::new();
    let input = f.file("g.txt", "r a 1\nr b 2\na b 1.5\nb c 1\na c 3\n");
    let args = ["oracle", "median", "--input", s(&input), "--root", "r", "--seed", "11"];
    let (x, y) = (run(&args), run(&args));
    assert!(x.status.success());
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn approx_four_point_line() {
    let f = Fixture::new();
    let pts = f.file("line.csv", "x\n0\n0.3333333333333333\n0.6666666666666666\n1\n");
    let v = json(&run(&["approx", "--points", s(&pts)]));
    assert!((v["radius"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-9);
    assert_eq!(v["certified"], true);
    assert_eq!(v["tree_edges"].as_array().unwrap().len(), 3);
}

#[test]
fn reduction_and_witness() {
    let f = Fixture::new();
    let sc = f.file("sc.json", r#"{"universe": [1, 2, 3, 4, 5, 6], "sets": [[1, 2, 3], [4, 5, 6]]}"#);
    let v = json(&run(&["reduce-setcover", "--input", s(&sc)]));
    assert_eq!(v["nodes"], 21);
    assert_eq!(v["edges"], 38);
    assert_eq!(v["roles"]["s1_4.5.6"]["role"], "set");
    let cover = f.file(
        "cover.json",
        r#"{"cover": [{"set": 0, "elements": [1, 2, 3]}, {"set": 1, "elements": [4, 5, 6]}]}"#,
    );
    let w = json(&run(&["witness", "--input", s(&sc), "--cover", s(&cover)]));
    assert!((w["cost"].as_f64().unwrap() - 28.0).abs() < 1e-12);
    assert!((w["radius"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // the reduction output loads as a graph
    let graph = f.file("gadget.json", &v.to_string());
    let r = json(&run(&["oracle", "radius", "--input", s(&graph), "--root", "r", "--max-iters", "50", "--restarts", "1"]));
    assert!(r["radius"].as_f64().unwrap() >= 28.0 * (1.0 - 1e-3));
}

#[test]
fn validation_errors_exit_one_with_json() {
    let f = Fixture::new();
    let bad = f.file("bad.txt", "a b -1\n");
    let (code, body) = error(&run(&["radius", "--input", s(&bad), "--root", "a"]));
    assert_eq!(code, 1);
    assert_eq!(body["error"]["kind"], "non_positive_length");

    let cyc = f.file("cyc.txt", "a b 1\nb c 1\nc a 1\n");
    let (code, body) = error(&run(&["radius", "--input", s(&cyc), "--root", "a"]));
    assert_eq!(code, 1);
    assert_eq!(body["error"]["kind"], "not_a_tree");

    let ok = f.file("ok.txt", "a b 1\n");
    let (code, body) = error(&run(&["radius", "--input", s(&ok), "--root", "zz"]));
    assert_eq!((code, body["error"]["kind"].as_str()), (1, Some("unknown_vertex")));
    let (code, body) = error(&run(&["radius", "--input", s(&ok), "--root", "a", "--budget", "0"]));
    assert_eq!((code, body["error"]["kind"].as_str()), (1, Some("invalid_config")));
    let (code, body) = error(&run(&["frobnicate"]));
    assert_eq!((code, body["error"]["kind"].as_str()), (1, Some("usage")));

    let alloc = f.file("alloc.json", r#"{"fractions": {"a-b": 0.5}}"#);
    let (code, body) = error(&run(&["eval", "--input", s(&ok), "--allocation", s(&alloc), "--root", "a"]));
    assert_eq!((code, body["error"]["kind"].as_str()), (1, Some("invalid_allocation")));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("radius"));
}
