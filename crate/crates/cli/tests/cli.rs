use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn blueforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blueforge"))
        .args(args)
        .env_remove("BLUEFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = blueforge(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).to_string_lossy().into_owned()
}

fn tmp(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sl2_spectrum_has_seven_points() {
    let v: Value = serde_json::from_str(&stdout(&["spec", "catalog:sl2", "--json"])).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 7);
    let mut gens: Vec<Vec<String>> = points
        .iter()
        .map(|p| p["generators"].as_array().unwrap().iter().map(|g| g.as_str().unwrap().to_string()).collect())
        .collect();
    gens.sort();
    assert!(gens.contains(&vec!["T1".to_string(), "T4".to_string()]));
    assert!(gens.contains(&vec!["T2".to_string(), "T3".to_string()]));
    assert_eq!(v["closed"].as_array().unwrap().len(), 2);
}

#[test]
fn zeta_of_the_affine_line() {
    assert_eq!(stdout(&["zeta", "catalog:A1"]), "s - 1\n");
    assert_eq!(stdout(&["zeta", "catalog:f1"]), "s\n");
}

#[test]
fn euler_characteristic_of_the_projective_line() {
    assert_eq!(stdout(&["qgrass", "chi", &example("p1-identity.json")]), "2\n");
    assert_eq!(stdout(&["qgrass", "naive", &example("p1-identity.json")]), "2\n");
    assert_eq!(stdout(&["qgrass", "count", &example("p1-identity.json"), "--q", "2,3"]), "2 3\n3 4\n");
}

#[test]
fn counts_of_the_projective_plane() {
    assert_eq!(stdout(&["count", "catalog:P2", "--q", "2,3,5"]), "2 7\n3 13\n5 31\n");
    assert_eq!(stdout(&["polyfit", "catalog:P2"]), "q^2 + q + 1\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["spec", "catalog:gr:2,4", "--json"][..],
        &["hasse", "catalog:P2"],
        &["complex", "catalog:P2"],
        &["orbit", "D", "3", "--oriflamme"],
        &["cspec", "catalog:twofields", "--json"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn emitted_json_reparses_to_an_equal_value() {
    for args in [
        &["spec", "catalog:sl2", "--json"][..],
        &["zeta", "catalog:gr:2,4", "--json"],
        &["coxeter", "B", "2", "--json"],
        &["k0", "catalog:f1", "--bound", "4", "--json"],
        &["arith", "classify-ideal", "0", "--json"],
    ] {
        let text = stdout(args);
        let v: Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(text, again, "{args:?}");
    }
}

#[test]
fn catalog_build_round_trips_through_files() {
    let json = stdout(&["catalog", "build", "sl2"]);
    let path = tmp("sl2.json", &json);
    assert_eq!(stdout(&["spec", &path]), stdout(&["spec", "catalog:sl2"]));
    let graded = stdout(&["catalog", "build", "proj", "2"]);
    let path = tmp("p2.json", &graded);
    assert_eq!(stdout(&["proj", &path]), stdout(&["proj", "catalog:P2"]));
}

#[test]
fn facet_lists_and_dot() {
    let facets = stdout(&["coxeter", "A", "3"]);
    assert_eq!(facets.lines().count(), 24);
    let dot = stdout(&["spec", "catalog:A1", "--dot"]);
    assert!(dot.starts_with("digraph spec {"));
    assert!(stdout(&["building", "1", "2", "--dot"]).starts_with("graph complex {"));
}

#[test]
fn arithmetic_queries() {
    assert_eq!(stdout(&["arith", "member", "3/2", "--remove", "2,∞"]), "true\n");
    assert_eq!(stdout(&["arith", "member", "3/2"]), "false\n");
    assert_eq!(stdout(&["arith", "member", "1/3", "--remove", "2"]), "false\n");
    assert!(stdout(&["arith", "surface-dim", "--primes", "2"]).starts_with("2\n"));
    assert_eq!(stdout(&["arith", "classify-ideal", "0"]), "closed ball of radius 0 (prime)\n");
}

#[test]
fn k0_of_f1_is_cyclic_on_the_free_rank_one_class() {
    let text = stdout(&["k0", "catalog:f1", "--bound", "5"]);
    assert!(text.starts_with("K0 = Z\n"), "{text}");
    assert!(text.contains("generates K0"));
}

#[test]
fn congruence_spectrum_of_f1_squared() {
    assert_eq!(stdout(&["cspec", "catalog:f1sq"]).lines().take(2).collect::<Vec<_>>(), ["0: {0}{1,-1}", "1: {0}{1}{-1}"]);
}

#[test]
fn exit_codes() {
    assert_eq!(blueforge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(blueforge(&["spec", "catalog:sl2", "--bogus"]).status.code(), Some(2));
    assert_eq!(blueforge(&["spec", "catalog:f1", "--budget", "1,2"]).status.code(), Some(2));
    assert_eq!(blueforge(&["spec", "catalog:nope"]).status.code(), Some(1));
    assert_eq!(blueforge(&["arith", "classify-ideal", "3"]).status.code(), Some(1));
    assert_eq!(blueforge(&["spec", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(blueforge(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_from_the_environment() {
    let bad = Command::new(env!("CARGO_BIN_EXE_blueforge"))
        .args(["spec", "catalog:f1"])
        .env("BLUEFORGE_BUDGET", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_blueforge"))
        .args(["spec", "catalog:A1", "--threads", "2"])
        .env("BLUEFORGE_BUDGET", "4,6,1000")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}
