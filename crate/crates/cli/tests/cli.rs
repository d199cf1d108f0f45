use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use k4perc::clique_process::k4_closure_fast;
use k4perc::io::{edge_list_string, read_edge_list};
use k4perc::{sample_gnp, DuplicatePolicy};

fn k4perc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k4perc"))
        .args(args)
        .env_remove("K4PERC_THREADS")
        .output()
        .unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_k4perc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

const K4_MINUS_EDGE: &str = "4 5\n0 1\n0 2\n0 3\n1 2\n1 3\n";
const C5: &str = "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n";

#[test]
fn percolate_exit_codes() {
    let yes = with_stdin(&["percolate"], K4_MINUS_EDGE);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(yes.stdout, b"true\n");
    let no = with_stdin(&["percolate"], C5);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(no.stdout, b"false\n");
}

#[test]
fn usage_io_and_guard_exit_codes() {
    assert_eq!(k4perc(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(k4perc(&["gnp", "--n", "10"]).status.code(), Some(2));
    assert_eq!(k4perc(&["percolate", "/definitely/not/here"]).status.code(), Some(3));
    assert_eq!(with_stdin(&["percolate"], "3 2\n0 1\n").status.code(), Some(3));
    assert_eq!(k4perc(&["enumerate", "--k", "12"]).status.code(), Some(4));
    assert_eq!(
        k4perc(&["scan-threshold", "--n", "1000", "--alpha", "1", "--max-n", "500"]).status.code(),
        Some(4)
    );
    assert_eq!(
        k4perc(&["scan-threshold", "--n", "1000", "--alpha", "1", "--memory-limit", "10"]).status.code(),
        Some(4)
    );
    assert_eq!(k4perc(&["constants", "--k", "5"]).status.code(), Some(2));
}

#[test]
fn strict_rejects_duplicate_edges() {
    let dup = "3 4\n0 1\n1 2\n0 2\n2 0\n";
    assert_eq!(with_stdin(&["percolate"], dup).status.code(), Some(0));
    assert_eq!(with_stdin(&["--strict", "percolate"], dup).status.code(), Some(3));
}

#[test]
fn gnp_then_fast_closure_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let g_path = dir.path().join("g.txt");
    let c_path = dir.path().join("c.txt");
    let g_str = g_path.to_str().unwrap();
    let out = k4perc(&["gnp", "--n", "300", "--p", "0.03", "--seed", "5", "--out", g_str]);
    assert!(out.status.success());
    let g = sample_gnp(300, 0.03, 5).unwrap();
    assert_eq!(fs::read_to_string(&g_path).unwrap(), edge_list_string(&g));
    let out = k4perc(&["closure", "--algo", "fast", g_str, "--out", c_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&c_path).unwrap();
    assert_eq!(text, edge_list_string(&k4_closure_fast(&g)));
    let back = read_edge_list(text.as_bytes(), DuplicatePolicy::Strict).unwrap();
    assert_eq!(back, k4_closure_fast(&g));
    let naive = k4perc(&["closure", "--algo", "naive", g_str]);
    assert_eq!(String::from_utf8(naive.stdout).unwrap(), text);
}

#[test]
fn core_reports_decomposition_or_refuses() {
    let out = with_stdin(&["core"], K4_MINUS_EDGE);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "seed-edge");
    assert_eq!(v["excess"], 0);
    let k4 = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
    assert_eq!(with_stdin(&["core"], k4).status.code(), Some(1));
}

#[test]
fn enumerate_k7_finds_one_core() {
    let out = k4perc(&["enumerate", "--k", "7", "--ell-max", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cores: Vec<&serde_json::Value> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["i"] == 0 && r["q"] == 7)
        .collect();
    assert_eq!(cores.len(), 1);
    assert_eq!(cores[0]["unlabeled_count"], 1);
    assert!(String::from_utf8(out.stderr).unwrap().contains("labelled"));
    let csv = k4perc(&["enumerate", "--k", "4", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "k,ell,i,q,labelled_count,unlabeled_count\n4,0,2,2,6,1\n"
    );
}

#[test]
fn constants_at_k8_pass() {
    let out = k4perc(&["constants", "--k", "8", "--strict"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_pass"], true);
    for (j, want) in [0.23, 0.43, 0.63, 0.90].iter().enumerate() {
        let got = v["values"][format!("case_sum_ell{j}")].as_f64().unwrap();
        assert!((got - want).abs() <= 0.02);
    }
}

#[test]
fn scans_are_thread_count_invariant() {
    let run = |threads: &str| {
        k4perc(&[
            "scan-threshold", "--n", "800", "--alpha", "0.5,2", "--trials", "5", "--format", "csv", "--threads",
            threads,
        ])
        .stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let text = String::from_utf8(one).unwrap();
    assert!(text.starts_with("n,alpha,p,trial,seed,percolated,max_clique,isolated,seed_edges,runtime_ms\n"));
    assert_eq!(text.lines().count(), 11);
    let env = Command::new(env!("CARGO_BIN_EXE_k4perc"))
        .args(["scan-threshold", "--n", "800", "--alpha", "0.5,2", "--trials", "5", "--format", "csv"])
        .env("K4PERC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, text.as_bytes());
}

#[test]
fn scan_clique_summary_json() {
    let out = k4perc(&["scan-clique", "--n", "500", "--alpha", "0.2", "--trials", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    let s = &v["summaries"][0];
    assert!((s["beta_star"].as_f64().unwrap() - 0.7701873124644239).abs() < 1e-9);
    assert_eq!(
        k4perc(&["scan-clique", "--n", "500", "--alpha", "0.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn seed_census_fills_the_column() {
    let out = k4perc(&["seed-census", "--n", "200", "--alpha", "3", "--trials", "2", "--cap", "10"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in v.as_array().unwrap() {
        assert!(row["seed_edges"].as_u64().unwrap() <= 10);
    }
}
