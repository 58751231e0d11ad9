//! End-to-end command tests. Every CLI example in the README appears here.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nilrat"))
}

fn fresh_cache(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nilrat-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn run_with_cache(cache: &PathBuf, args: &[&str]) -> Output {
    bin()
        .env("NILRAT_CACHE", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn kf_prints_polynomial() {
    let cache = fresh_cache("kf");
    let out = run_with_cache(&cache, &["kf", "--lambda", "2,1", "--mu", "1,1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "q + q^2\n");
}

#[test]
fn dim_prints_dimension_and_rejects_invalid_partitions() {
    let cache = fresh_cache("dim");
    let out = run_with_cache(
        &cache,
        &["dim", "--type", "C", "--rank", "3", "--orbit", "3,3"],
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "14\n");

    let out = run_with_cache(
        &cache,
        &["dim", "--type", "C", "--rank", "3", "--orbit", "5,1"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("odd multiplicity"),
        "message should cite the parity rule: {}",
        stderr(&out)
    );
}

#[test]
fn ratsing_json_contains_the_c3_locus() {
    let cache = fresh_cache("ratsing");
    let out = run_with_cache(
        &cache,
        &[
            "ratsing", "--type", "C", "--rank", "3", "--orbit", "3,3", "--json",
        ],
    );
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["ratSingMaximal"], serde_json::json!(["2,2,1,1"]));
    assert_eq!(json["locusDimension"], serde_json::json!(10));
}

#[test]
fn json_outputs_are_byte_identical_across_cache_hit_and_miss() {
    let cache = fresh_cache("bytes");
    let args = [
        "ratsing", "--type", "D", "--rank", "4", "--orbit", "5,3", "--json",
    ];
    let miss = run_with_cache(&cache, &args);
    assert!(miss.status.success());
    // second run hits the cache written by the first
    let hit = run_with_cache(&cache, &args);
    assert!(hit.status.success());
    assert_eq!(stdout(&miss), stdout(&hit));

    // corrupting every cache file must not change the output
    for entry in std::fs::read_dir(&cache).unwrap() {
        std::fs::write(entry.unwrap().path(), b"not json").unwrap();
    }
    let corrupted = run_with_cache(&cache, &args);
    assert!(corrupted.status.success());
    assert_eq!(stdout(&miss), stdout(&corrupted));
}

#[test]
fn g2_orbits_by_label_name() {
    let cache = fresh_cache("g2");
    let out = run_with_cache(&cache, &["dim", "--type", "G2", "--orbit", "A~1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "8\n");
    let out = run_with_cache(&cache, &["orbits", "--type", "G2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 5);
    // stalk computations remain classical-only
    let out = run_with_cache(
        &cache,
        &["stalk", "--type", "G2", "--lambda", "A1", "--mu", "0"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn brion0_reports_the_g2_minimal_orbit() {
    let cache = fresh_cache("brion");
    let out = run_with_cache(
        &cache,
        &["brion0", "--type", "G2", "--orbit", "A1", "--json"],
    );
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["dimX"], serde_json::json!(6));
    assert_eq!(json["brionSum"], serde_json::json!(6));
    assert_eq!(json["passes"], serde_json::json!(true));

    let out = run_with_cache(
        &cache,
        &["brion0", "--type", "C", "--rank", "3", "--orbit", "3,3"],
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("fails"));
}

#[test]
fn orbits_lists_the_canonical_order() {
    let cache = fresh_cache("orbits");
    let out = run_with_cache(&cache, &["orbits", "--type", "C", "--rank", "3"]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(|l| l.to_string()).collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0].starts_with("6 "));
    assert!(lines[7].starts_with("1,1,1,1,1,1"));
}

#[test]
fn springer_lists_blocks() {
    let cache = fresh_cache("springer");
    let out = run_with_cache(&cache, &["springer", "--type", "C", "--rank", "3", "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 8);
}

#[test]
fn stalk_query_matches_the_golden_pair() {
    let cache = fresh_cache("stalk");
    let out = run_with_cache(
        &cache,
        &[
            "stalk", "--type", "C", "--rank", "3", "--lambda", "3,3", "--mu", "2,1,1,1,1",
        ],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("trivial: true"));
    assert!(text.contains("rationally smooth at 2,1,1,1,1: false"));

    // incomparable pair is a math-input error
    let out = run_with_cache(
        &cache,
        &[
            "stalk", "--type", "C", "--rank", "3", "--lambda", "3,3", "--mu", "4,2",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_export_marks_the_locus() {
    let cache = fresh_cache("dot");
    let dot_path = cache.join("c3.dot");
    std::fs::create_dir_all(&cache).unwrap();
    let out = run_with_cache(
        &cache,
        &[
            "ratsing",
            "--type",
            "C",
            "--rank",
            "3",
            "--orbit",
            "3,3",
            "--dot",
            dot_path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    // five nodes below (3,3); the locus members are filled
    assert_eq!(dot.matches("label=").count(), 5);
    assert!(dot.contains("\"2,2,1,1\" [label=\"2,2,1,1\\ndim 10\", style=filled]"));
    assert!(dot.contains("\"2,1,1,1,1\" [label=\"2,1,1,1,1\\ndim 6\", style=filled]"));
    assert!(dot.contains("\"1,1,1,1,1,1\" [label=\"1,1,1,1,1,1\\ndim 0\", style=filled]"));
    assert!(!dot.contains("\"3,3\" [label=\"3,3\\ndim 14\", style=filled]"));
    assert!(dot.contains("\"2,2,2\" -> \"3,3\""));
    assert!(dot.contains("\"2,2,1,1\" -> \"2,2,2\""));

    // nilcone: nothing filled
    let nil_path = cache.join("nilcone.dot");
    let out = run_with_cache(
        &cache,
        &[
            "ratsing",
            "--type",
            "C",
            "--rank",
            "2",
            "--orbit",
            "4",
            "--dot",
            nil_path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&nil_path).unwrap();
    assert!(!dot.contains("style=filled"));

    // zero orbit: a single unmarked node
    let zero_path = cache.join("zero.dot");
    let out = run_with_cache(
        &cache,
        &[
            "ratsing",
            "--type",
            "C",
            "--rank",
            "2",
            "--orbit",
            "1,1,1,1",
            "--dot",
            zero_path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&zero_path).unwrap();
    assert_eq!(dot.matches("label=").count(), 1);
    assert!(!dot.contains("style=filled"));
    assert!(!dot.contains("->"));
}

#[test]
fn selftest_reduced_passes_and_cache_clear_reports() {
    let cache = fresh_cache("selftest");
    let out = run_with_cache(&cache, &["selftest", "--max-rank", "2"]);
    assert!(out.status.success(), "selftest failed:\n{}", stdout(&out));
    assert!(stdout(&out).contains("all "));

    let out = run_with_cache(&cache, &["cache-clear"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("removed"));
}

#[test]
fn usage_errors_exit_one() {
    let cache = fresh_cache("usage");
    let out = run_with_cache(&cache, &["kf", "--lambda", "2,1"]);
    assert_eq!(out.status.code(), Some(1)); // missing --mu
    let out = run_with_cache(&cache, &["kf", "--lambda", "2,1", "--mu", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(1)); // unknown flag
    let out = run_with_cache(&cache, &["dim", "--type", "Q", "--rank", "2", "--orbit", "2"]);
    assert_eq!(out.status.code(), Some(2)); // unknown family is a math-input error
}

#[test]
fn rank_bound_is_a_math_input_error_and_overridable() {
    let cache = fresh_cache("rank");
    let out = run_with_cache(
        &cache,
        &["springer", "--type", "A", "--rank", "9", "--json"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bound"));
    // --max-rank replaces the default bounds in both directions
    let out = run_with_cache(
        &cache,
        &[
            "springer", "--type", "C", "--rank", "3", "--max-rank", "2", "--json",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run_with_cache(
        &cache,
        &[
            "springer", "--type", "C", "--rank", "3", "--max-rank", "3", "--json",
        ],
    );
    assert!(out.status.success());
}
