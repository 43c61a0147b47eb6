use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn graph(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs");
    root.join(format!("{name}.graph")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcoh"))
        .args(args)
        .env_remove("LATCOH_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn latnv1_canonical_cycle() {
    let g = graph("latnv1");
    let o = run(&["invariants", &g]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("Z_K = (7,14,5;3;7,14,5)"), "{out}");
    assert!(out.contains("H = 0"));
}

#[test]
fn a2_discriminant_group() {
    let v = json(&["invariants", &graph("a2"), "--class", "all"]);
    assert_eq!(v["schema"], "latcoh/v1");
    assert_eq!(v["command"], "invariants");
    assert_eq!(v["result"]["h_factors"], serde_json::json!([3]));
    assert_eq!(v["result"]["classes"].as_array().unwrap().len(), 3);
    assert!(stdout(&run(&["invariants", &graph("a2")])).contains("H = Z/3"));
}

#[test]
fn minus_one_vertex_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_latcoh"))
        .args(["invariants", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"vertex 1 -1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("Z_K = (-1)"));
}

#[test]
fn sigma237_root_dot() {
    let o = run(&["root", &graph("sigma237"), "--format", "dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("xlabel=\"0\"").count(), 2);
    assert_eq!(dot.matches("xlabel=\"1\"").count(), 1);
}

#[test]
fn a2_spectral_sequence_degenerates_at_two() {
    let v = json(&["specseq", &graph("a2"), "--s", "1,1"]);
    let cls = &v["result"]["classes"][0];
    assert_eq!(cls["degeneration"], 2);
}

#[test]
fn verify_passes_on_a2() {
    let o = run(&["verify", &graph("a2"), "--nmax", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn reduce_reproduces_twonodes_table() {
    let o = run(&["reduce", &graph("twonodes"), "--bad", "2,7", "--rect", "19,19"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let grid: Vec<String> = out
        .lines()
        .skip(2)
        .take(20)
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect();
    let golden = include_str!("../../core/tests/golden/twonodes_wbar.txt");
    let want: Vec<&str> = golden.lines().collect();
    assert_eq!(grid, want);
}

#[test]
fn blowup_appends_a_minus_one_vertex() {
    let o = run(&["blowup", &graph("a2"), "--center", "edge:1,2", "--s", "1,0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("vertex 3 -1"));
    assert!(out.contains("vertex 1 -3"));
    assert!(out.contains("pulled back s = (1,0,0)"));
}

#[test]
fn decorated_arrows_are_blown_up_on_load() {
    let v = json(&["invariants", &graph("p2_b1")]);
    assert_eq!(v["config"]["decorations_applied"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "vertex 1 -2\nedge 1\n").unwrap();
    let bad = bad.display().to_string();
    assert_eq!(run(&["invariants", &bad]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "/nonexistent/x.graph"]).status.code(), Some(2));
    assert_eq!(run(&["specseq", &graph("a2"), "--page", "0", "--s", "1,1"]).status.code(), Some(2));

    let a2 = graph("a2");
    assert_eq!(run(&["homology", &a2, "--class", "1"]).status.code(), Some(3));
    assert_eq!(run(&["specseq", &a2]).status.code(), Some(3));
    assert_eq!(run(&["homology", &a2, "--rect=-1,0"]).status.code(), Some(3));
    assert_eq!(run(&["reduce", &a2, "--bad", "9"]).status.code(), Some(3));

    let o = run(&["homology", &graph("sigma237"), "--rect", "40,40,40,40", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn output_is_deterministic() {
    let args = ["series", &graph("sigma237"), "--s", "1,0,0,0", "--format", "json"];
    let a = stdout(&run(&args));
    let b = stdout(&run(&args));
    assert_eq!(a, b);
    let c = stdout(&run(&["series", &graph("sigma237"), "--s", "1,0,0,0", "--format", "json", "--jobs", "1"]));
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"jobs\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&c));
}
