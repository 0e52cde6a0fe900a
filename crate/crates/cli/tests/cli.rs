use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn monosync(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monosync"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = monosync(dir, &all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn gen(dir: &Path, name: &str, args: &[&str]) {
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", name]);
    let out = monosync(dir, &all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn shortest_word_on_ternary_family() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "t2.dfa", &["ternary", "--m", "2"]);
    for method in ["poly", "oracle"] {
        let (code, v) = json(
            dir.path(),
            &["shortest-word", "t2.dfa", "--subset", "1", "5", "--method", method],
        );
        assert_eq!(code, 0);
        assert_eq!(v["status"], "OK");
        assert_eq!(v["witness"]["rendered"], "1 0 1 0 1 2");
        assert_eq!(v["witness"]["letters"], serde_json::json!([1, 0, 1, 0, 1, 2]));
        assert_eq!(v["witness"]["length"], 6);
    }
    // the file's own subset line is the default
    let (_, v) = json(dir.path(), &["shortest-word", "t2.dfa"]);
    assert_eq!(v["witness"]["length"], 6);
}

#[test]
fn singleton_is_synchronized_by_the_empty_word() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "t1.dfa", &["ternary", "--m", "1"]);
    let (code, v) = json(dir.path(), &["check-sync", "t1.dfa", "--subset", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "OK");
    assert_eq!(v["witness"]["length"], 0);
    assert_eq!(v["witness"]["rendered"], "");
}

#[test]
fn non_synchronizing_subset_exits_one() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "t1.dfa", &["ternary", "--m", "1"]);
    let (code, v) = json(dir.path(), &["check-sync", "t1.dfa", "--subset", "0", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "NO");
    assert!(v["witness"].is_null());
}

#[test]
fn intersect_counter_acceptors() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "c3.dfa", &["counter", "--k", "3", "--acceptors"]);
    let (code, v) = json(dir.path(), &["intersect", "c3.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["length"], 7);
    assert_eq!(v["witness"]["rendered"], "a1 a2 a1 a3 a1 a2 a1");
    assert_eq!(v["details"]["acceptors"], 3);
}

#[test]
fn intersect_accepts_one_acceptor_per_file() {
    let dir = TempDir::new().unwrap();
    let a = "dfa 2 2\n1 0\n1 1\ninitial: 0\naccepting: 1\n";
    let b = "dfa 2 2\n0 1\n1 1\ninitial: 0\naccepting: 1\n";
    write(dir.path(), "a.dfa", a);
    write(dir.path(), "b.dfa", b);
    let (code, v) = json(dir.path(), &["intersect", "a.dfa", "b.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["letters"], serde_json::json!([0, 1]));
}

#[test]
fn rank_and_poly_refusal_on_gap_family() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "g.dfa", &["pairwise-gap", "--l", "2"]);
    let (code, v) = json(dir.path(), &["rank", "g.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["rank"], 3);
    let (code, v) = json(dir.path(), &["check-sync", "g.dfa"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "ERROR");
    let (code, _) = json(dir.path(), &["check-sync", "g.dfa", "--method", "oracle"]);
    assert_eq!(code, 1);
}

#[test]
fn careful_counter_and_budget() {
    let dir = TempDir::new().unwrap();
    gen(
        dir.path(),
        "p.dfa",
        &["counter", "--k", "2", "--partial", "--base", "3"],
    );
    let (code, v) = json(dir.path(), &["careful", "p.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["rendered"], "a1 a1 a2 a1 a1 a2 a1 a1 a");
    let (code, v) = json(dir.path(), &["careful", "p.dfa", "--budget-nodes", "3"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "BUDGET_EXCEEDED");
}

#[test]
fn trimmed_ternary_is_carefully_synchronizing() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "t2.dfa", &["ternary", "--m", "2"]);
    gen(dir.path(), "p.dfa", &["trim", "t2.dfa"]);
    let (code, v) = json(dir.path(), &["careful", "p.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["length"], 6);
}

#[test]
fn classify_reports_order() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "b.dfa", &["binary", "--m", "1"]);
    let (code, v) = json(dir.path(), &["classify", "b.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["monotonic"], "yes");
    assert_eq!(v["details"]["states"], 7);
    write(dir.path(), "swap.dfa", "dfa 3 1\n1\n0\n2\n");
    let (_, v) = json(dir.path(), &["classify", "swap.dfa"]);
    assert_eq!(v["details"]["monotonic"], "no");
    assert_eq!(v["details"]["order"], "NONE");
}

#[test]
fn max_subset_report() {
    let dir = TempDir::new().unwrap();
    gen(dir.path(), "t1.dfa", &["ternary", "--m", "1"]);
    let (code, v) = json(dir.path(), &["max-subset", "t1.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["subset"], serde_json::json!([1, 2, 3]));
}

#[test]
fn reductions_solve() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "sat.cnf", "p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n");
    write(dir.path(), "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    for kind in ["sat-intersection", "sat-careful"] {
        let (code, v) = json(dir.path(), &["reduce", kind, "sat.cnf", "--solve"]);
        assert_eq!(code, 0, "{kind}");
        assert_eq!(v["details"]["satisfies"], true);
        let (code, v) = json(dir.path(), &["reduce", kind, "unsat.cnf", "--solve"]);
        assert_eq!(code, 1, "{kind}");
        assert_eq!(v["details"]["satisfiable"], false);
    }
    let (_, v) = json(dir.path(), &["reduce", "max3sat-rank", "unsat.cnf", "--solve"]);
    assert_eq!(v["details"]["rank"], 3);
    assert_eq!(v["details"]["min_unsatisfied"], 1);
}

#[test]
fn reduce_output_is_readable_by_other_commands() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "sat.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    let out = monosync(dir.path(), &["reduce", "sat-intersection", "sat.cnf", "-o", "acc.dfa"]);
    assert!(out.status.success());
    let (code, v) = json(dir.path(), &["intersect", "acc.dfa"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["rendered"], "0 1 r");
    monosync(dir.path(), &["reduce", "max3sat-rank", "sat.cnf", "-o", "rank.dfa"]);
    let (_, v) = json(dir.path(), &["rank", "rank.dfa"]);
    assert_eq!(v["details"]["rank"], 2);
    monosync(dir.path(), &["reduce", "sat-careful", "sat.cnf", "-o", "careful.dfa"]);
    let (code, _) = json(dir.path(), &["careful", "careful.dfa"]);
    assert_eq!(code, 0);
}

#[test]
fn roadcolor_decision_and_search() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "d.g", "digraph 4 2\n1 1\n2 0\n3 3\n0 2\n");
    let (code, v) = json(dir.path(), &["roadcolor", "d.g", "--subset", "0", "2", "--search"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["period"], 2);
    assert_eq!(v["details"]["classes"], serde_json::json!([[0, 2], [1, 3]]));
    assert_eq!(v["details"]["search_agrees"], true);
    assert!(v["details"]["text"].as_str().unwrap().contains("dfa 4 2"));
    let (code, _) = json(dir.path(), &["roadcolor", "d.g", "--subset", "0", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn selftest_passes() {
    let dir = TempDir::new().unwrap();
    let (code, v) = json(dir.path(), &["selftest", "--count", "25", "--seed", "4"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["details"]["length_mismatches"], 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = monosync(dir.path(), &["gen", "monotone", "--n", "6", "--k", "2", "--seed", "17"]);
    let b = monosync(dir.path(), &["gen", "monotone", "--n", "6", "--k", "2", "--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(dir.path().join("m.dfa"), &a.stdout).unwrap();
    let r1 = monosync(dir.path(), &["max-subset", "m.dfa", "--json"]);
    let r2 = monosync(dir.path(), &["max-subset", "m.dfa", "--json"]);
    assert_eq!(r1.stdout, r2.stdout);
    let (_, v) = json(dir.path(), &["max-subset", "m.dfa", "--timing"]);
    assert!(v["elapsed_ms"].is_number());
    let (_, v) = json(dir.path(), &["max-subset", "m.dfa"]);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn errors_exit_two() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.dfa", "dfa 2 1\n0\n5\n");
    let out = monosync(dir.path(), &["classify", "bad.dfa"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = monosync(dir.path(), &["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = monosync(dir.path(), &["shortest-word", "missing.dfa", "--subset", "0"]);
    assert_eq!(out.status.code(), Some(2));
    write(dir.path(), "p.dfa", "pdfa 2 1\n-\n1\n");
    let (code, v) = json(dir.path(), &["check-sync", "p.dfa", "--subset", "0"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("complete"));
}
