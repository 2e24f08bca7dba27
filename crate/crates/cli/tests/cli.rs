use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cluster(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cluster-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn mutate_cex1() {
    let out = cluster(&["mutate", "--matrix", &fixture("cex1.mat"), "--path", "2,1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().last().unwrap().trim(), "0 0 -1");

    let out = cluster(&["mutate", "--matrix", "cex1", "--path", "2,1,3", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["matrix"][3], serde_json::json!([0, 0, -1]));
}

#[test]
fn mutate_seed_reports_variables() {
    let out = cluster(&["mutate", "--type", "A2", "--path", "1", "--seed", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("x2"), "{}", s);
}

#[test]
fn quiver_input_matches_matrix() {
    let q = scratch("a2.quiver");
    std::fs::write(&q, "v 2 0\na 1 2 1 1\n").unwrap();
    let a = cluster(&["mutate", "--quiver", q.to_str().unwrap(), "--path", "1"]);
    let b = cluster(&["mutate", "--type", "A2", "--path", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn examples_nongroup() {
    let out = cluster(&["examples", "--run", "nongroup"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["pass"], Value::Bool(true));
}

#[test]
fn examples_all() {
    let out = cluster(&["examples", "--run", "all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    for name in ["nongroup", "weakaut-a2", "cex1", "cex2"] {
        assert_eq!(v[name]["pass"], Value::Bool(true), "{}", name);
    }
}

#[test]
fn groups_a2() {
    let out = cluster(&["groups", "--type", "A2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["order"], 5);
    assert_eq!(v["cyclic"], true);
}

#[test]
fn qaut_cex2() {
    let out = cluster(&["qaut", "--matrix", "cex2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["order"], 8);
    assert_eq!(v["aut_triv_order"], 24);
    assert_eq!(v["subgroup_index_in_aut_triv"], 3);
}

#[test]
fn classify_weak_automorphism() {
    let out = cluster(&[
        "classify",
        "--matrix",
        &fixture("weakaut-a2.mat"),
        "--map",
        &fixture("weakaut-tau.map"),
        "--path",
        "1",
        "--relabel",
        "2,1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["class"], "weak_cluster_automorphism");
}

#[test]
fn graph_census_and_dot() {
    let dot = scratch("a3.dot");
    let out = cluster(&["graph", "--type", "A3", "--dot", dot.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["nodes"], 14);
    assert_eq!(v["expected_nodes"], 14);
    assert_eq!(v["regular"], true);
    let text = std::fs::read_to_string(dot).unwrap();
    assert_eq!(text.matches(" -- ").count(), 21);
}

#[test]
fn graph_cap_surfaces() {
    let out = cluster(&["graph", "--type", "Rank2:2,2", "--cap", "10", "--mode", "symbolic", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["cap_hit"], true);
    assert_eq!(v["finite"], false);
}

#[test]
fn verify_formulas_exit_codes() {
    let ok = cluster(&["verify-formulas", "--type", "E7", "--trials", "50", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["pass"], true);
    let bad = cluster(&["verify-formulas", "--type", "E7", "--trials", "50", "--printed", "--json"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(json_of(&bad)["first_failure"].is_object());
}

#[test]
fn deterministic_output() {
    let args = ["verify-formulas", "--type", "AffE8", "--trials", "40", "--rng-seed", "9", "--printed"];
    let a = cluster(&args);
    let b = cluster(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = cluster(&["qaut", "--type", "D4", "--principal"]);
    let b = cluster(&["qaut", "--type", "D4", "--principal"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_input_exits_one() {
    let bad = scratch("bad.mat");
    std::fs::write(&bad, "2 2\n0 1\n-1 x\n").unwrap();
    let out = cluster(&["mutate", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(cluster(&["mutate", "--type", "A3", "--path", "4"]).status.code(), Some(1));
    assert_eq!(cluster(&["mutate", "--type", "Q7"]).status.code(), Some(1));
    assert_eq!(cluster(&["nonsense"]).status.code(), Some(1));
}
