//! End-to-end checks of the command-line interface: exit codes, report
//! shapes, determinism and figure output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn speiser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_speiser"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus_file(name: &str) -> String {
    corpus().join(name).display().to_string()
}

#[test]
fn feasible_extension_exits_zero() {
    let out = speiser(&["extend", &corpus_file("thurston-fig10.json"), "--q", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["q"], 6);
    assert!(report["witness"].is_null());
}

#[test]
fn infeasible_extension_exits_one_with_cross_witness() {
    let out = speiser(&["extend", &corpus_file("no-local-balance.json"), "--q", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["witness"]["side"], "cross");
    assert_eq!(report["witness"]["set"].as_array().unwrap().len(), 2);
}

#[test]
fn broken_twins_exit_two() {
    let dir = std::env::temp_dir().join("speiser-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(
        &path,
        r#"{"vertices":[{"id":0,"kind":"circle","rotation":[0]},{"id":1,"kind":"cross","rotation":[1]}],"twins":[[0,0]]}"#,
    )
    .unwrap();
    let out = speiser(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_sixty_six() {
    let out = speiser(&["validate", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(66));
}

#[test]
fn bad_usage_exits_sixty_four() {
    let out = speiser(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn corpus_run_is_deterministic_and_green() {
    let dir = corpus().display().to_string();
    let a = speiser(&["corpus-run", "--corpus-dir", &dir]);
    let b = speiser(&["corpus-run", "--corpus-dir", &dir]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout, "two corpus runs must be byte-identical");
}

#[test]
fn corpus_dir_env_override_works() {
    let out = Command::new(env!("CARGO_BIN_EXE_speiser"))
        .args(["corpus-run"])
        .env("SPEISER_CORPUS_DIR", corpus())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dot_output_reparses_with_matching_counts() {
    let out = speiser(&["render", &corpus_file("w4.json"), "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    let nodes = dot.lines().filter(|l| l.trim_start().starts_with('v') && l.contains("[shape=")).count();
    let edges = dot.lines().filter(|l| l.contains(" -- v")).count();
    assert_eq!(nodes, 10);
    assert_eq!(edges, 13);
}

#[test]
fn svg_draws_red_nucleus_and_black_rays() {
    let out = speiser(&["render", &corpus_file("airy.json"), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(svg.contains("#cc0000") || svg.contains("end 0"), "nucleus or rays missing");
    assert!(svg.contains("end 2"), "three end rays expected");
    // Deterministic output.
    let again = speiser(&["render", &corpus_file("airy.json"), "--format", "svg"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn svg_refuses_periodic_graphs() {
    let out = speiser(&["render", &corpus_file("exp-sin.json"), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn label_and_verify_round_trip() {
    let dir = std::env::temp_dir().join("speiser-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let labels = dir.join("q5.labels.json");
    let out = speiser(&[
        "label",
        &corpus_file("thurston-fig10-q5.json"),
        "--q",
        "5",
        "--out",
        labels.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = speiser(&[
        "verify-label",
        &corpus_file("thurston-fig10-q5.json"),
        "--labels",
        labels.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], true);
}

#[test]
fn bad_labelling_exits_one() {
    let out = speiser(&[
        "verify-label",
        &corpus_file("thurston-fig10-labelled6.json"),
        "--labels",
        &corpus_file("thurston-fig10-labelled6.labels.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["minimality_failures"], serde_json::json!([4]));
}

#[test]
fn balance_tsv_has_one_row_per_file() {
    let out = speiser(&[
        "balance",
        &corpus_file("thurston-fig10.json"),
        &corpus_file("thurston-fig10-q6.json"),
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "header plus two rows: {text}");
    assert!(lines[0].starts_with("name\thall"));
    assert!(lines[1].contains("true"));
}

#[test]
fn balance_violated_exits_one() {
    let out = speiser(&["balance", &corpus_file("no-local-balance.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decompose_reports_counts() {
    let out = speiser(&["decompose", &corpus_file("w4.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["counts"]["p"], 4);
    assert_eq!(report["nucleus"]["vertices"].as_array().unwrap().len(), 10);
}

#[test]
fn dual_then_primal_round_trip_through_files() {
    let dir = std::env::temp_dir().join("speiser-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let tpath = dir.join("fig10.tgraph.json");
    let out = speiser(&["primal", &corpus_file("thurston-fig10.json"), "--out", tpath.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = speiser(&["dual", tpath.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let g = speiser_core::graph::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let orig = speiser_core::corpus::load_graph(&corpus(), "thurston-fig10.json").unwrap();
    assert!(g.is_isomorphic(&orig));
}

#[test]
fn empty_manifest_passes_with_warning() {
    let dir = std::env::temp_dir().join("speiser-empty-corpus");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("manifest.json"), r#"{"entries": []}"#).unwrap();
    let out = speiser(&["corpus-run", "--corpus-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report["warnings"].as_array().unwrap().is_empty());
}
