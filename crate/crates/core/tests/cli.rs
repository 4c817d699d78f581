use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adhesive"))
        .args(args)
        .env_remove("ADHESIVE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn apply_writes_the_derivation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let dot = dir.path().join("d.dot");
    let r = run(&[
        "apply",
        "--rule",
        s(&fixture("edge_to_fresh_vertex.json")),
        "--host",
        s(&fixture("path2.json")),
        "--out",
        s(&out),
        "--dot",
        s(&dot),
    ]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
    let d: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(d.get("objects").is_some());
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

#[test]
fn dangling_match_exits_one() {
    let r = run(&[
        "apply",
        "--rule",
        s(&fixture("delete_vertex.json")),
        "--host",
        s(&fixture("path2.json")),
        "--match",
        "1",
    ]);
    assert_eq!(code(&r), 1);
    assert!(String::from_utf8_lossy(&r.stderr).contains("dangling"));
}

#[test]
fn malformed_input_exits_two() {
    let r = run(&["apply", "--rule", s(&fixture("malformed.json")), "--host", s(&fixture("path2.json"))]);
    assert_eq!(code(&r), 2);
    let r = run(&["render", s(&fixture("missing.json"))]);
    assert_eq!(code(&r), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["check", "--law", "no-such-law"])), 2);
    assert_eq!(code(&run(&["-c", "sets", "check"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn check_passes_on_multigraph() {
    let r = run(&["check", "--law", "stability", "--seed", "7", "--iters", "20"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn check_all_classifies_simple_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let r = run(&["-c", "simplegraph", "check", "--iters", "200", "--seed", "1", "--report", s(&report)]);
    assert_eq!(code(&r), 1);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["level"], "rm-quasiadhesive");
}

#[test]
fn check_is_deterministic_and_budget_comes_from_the_environment() {
    let args = ["-c", "simplegraph", "check", "--law", "regular-union", "--seed", "3"];
    let a = Command::new(env!("CARGO_BIN_EXE_adhesive")).args(args).env("ADHESIVE_BUDGET", "60").output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_adhesive")).args(args).env("ADHESIVE_BUDGET", "60").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["iters"], 60);
}

#[test]
fn zero_iterations_pass_vacuously() {
    assert_eq!(code(&run(&["-c", "simplegraph", "check", "--iters", "0"])), 0);
}

#[test]
fn recheck_reproduces_a_stored_counterexample() {
    let r = run(&["-c", "simplegraph", "recheck", s(&fixture("sg_counterexample.json"))]);
    assert_eq!(code(&r), 1);
    let r = run(&["-c", "multigraph", "recheck", s(&fixture("sg_counterexample.json"))]);
    assert_eq!(code(&r), 2);
}

#[test]
fn render_is_byte_identical_across_runs() {
    let file = fixture("sg_counterexample.json");
    let args = ["-c", "simplegraph", "render", s(&file)];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let dot = String::from_utf8(a.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("cluster_A"));
}

#[test]
fn render_a_single_graph() {
    let r = run(&["render", s(&fixture("path2.json"))]);
    assert_eq!(code(&r), 0);
    let dot = String::from_utf8(r.stdout).unwrap();
    assert!(dot.contains("\"0\" -> \"1\""));
}
