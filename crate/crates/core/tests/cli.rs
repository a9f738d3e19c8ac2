use std::process::{Command, Output};

use measure_compression::report::{cmd_theorem_check_with, TheoremArgs, EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION};
use measure_compression::generate::{GeneratorConfig, InstanceGenerator};
use measure_compression::{lipschitz_fast, Compression, CompressionResult, Map};
use serde_json::Value;

fn mcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcomp"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_worked_example() {
    let out = mcomp(&["classify", "fixtures/phi.json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let report = json_of(&out);
    assert_eq!(report["results"]["compression"], "5/6");
    assert_eq!(report["results"]["inp"], true);
    assert_eq!(report["inputs"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_reports_unbounded_for_non_inp_map() {
    let out = mcomp(&["classify", "fixtures/psi.json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let report = json_of(&out);
    assert_eq!(report["results"]["compression"], "unbounded");
    assert_eq!(report["results"]["inp"], false);
}

#[test]
fn classify_metric_map() {
    let report = json_of(&mcomp(&["classify", "fixtures/constant_metric.json"]));
    assert_eq!(report["results"]["compression"], "3");
    assert_eq!(report["results"]["lipschitz"], "0");
    assert_eq!(report["results"]["bounded_deformation"], true);
}

#[test]
fn validate_rejects_bad_inputs() {
    let out = mcomp(&["validate", "fixtures/s1.json", "fixtures/overlap.json", "fixtures/split.json"]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let files = json_of(&out)["results"]["files"].as_array().unwrap().clone();
    assert_eq!(files[0]["ok"], true);
    assert_eq!(files[1]["error"]["kind"], "PartitionOverlap");
    assert_eq!(files[2]["error"]["kind"], "NotMeasurable");
}

#[test]
fn validate_reports_negative_weight_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("neg.json");
    std::fs::write(&path, r#"{"points":["a"],"atoms":[["a"]],"weights":["-1/2"]}"#).unwrap();
    let out = mcomp(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let error = &json_of(&out)["results"]["files"][0]["error"];
    assert_eq!(error["kind"], "NegativeWeight");
    assert_eq!(error["field"], "weights[0]");
}

#[test]
fn missing_file_is_an_input_error() {
    let out = mcomp(&["classify", "fixtures/nope.json"]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn theorem_check_budget_exceeded() {
    let out = mcomp(&["theorem-check", "fixtures/phi.json", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    assert_eq!(json_of(&out)["results"]["instance"]["error"]["kind"], "BudgetExceeded");
}

#[test]
fn functor_check_pair_and_mismatch() {
    let ok = mcomp(&["functor-check", "fixtures/phi.json", "fixtures/swap.json"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = mcomp(&["functor-check", "fixtures/phi.json", "fixtures/phi.json"]);
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
}

#[test]
fn output_flag_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = mcomp(&["--format", "text", "--output", path.to_str().unwrap(), "classify", "fixtures/phi.json"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("classify: ok (exit 0)"));
    assert!(text.contains("compression = \"5/6\""));
}

/// Drops the last atom from the maximization, so it misses some maxima.
fn skips_last_atom(map: &Map) -> Compression {
    let truncated = match map.compression() {
        CompressionResult::Bounded(_) => {
            let target = map.target();
            let last = target.num_atoms() - 1;
            let push = map.pushforward();
            (0..last)
                .filter(|&b| !target.weight(b).is_zero() && target.weight(b).is_finite())
                .map(|b| push.mass(b).checked_div(target.weight(b)).unwrap().into_finite().unwrap())
                .max()
                .unwrap_or_default()
        }
        unbounded => return unbounded,
    };
    CompressionResult::Bounded(truncated)
}

#[test]
fn injected_fast_path_bug_is_caught_with_small_witness() {
    let args = TheoremArgs { map: None, budget: 12, trials: Some(100), seed: 7 };
    let report = cmd_theorem_check_with(&args, skips_last_atom);
    assert_eq!(report.exit_code, EXIT_VIOLATION);
    let violation = report.violations.iter().find(|v| v.law == "theorem_agreement").unwrap();
    let trial = violation.witness["trial"].as_u64().unwrap();
    let size = |map: &Map| map.source().num_atoms() + map.target().num_atoms();
    let failing: Vec<(usize, u64)> = (0..100)
        .filter_map(|t| {
            let map: Map = InstanceGenerator::new(7, t, GeneratorConfig::default()).instance();
            (skips_last_atom(&map) != lipschitz_fast(&map)).then(|| (size(&map), t))
        })
        .collect();
    let smallest = failing.iter().map(|&(s, _)| s).min().unwrap();
    let witness_size = failing.iter().find(|&&(_, t)| t == trial).unwrap().0;
    assert_eq!(witness_size, smallest);

    let clean = cmd_theorem_check_with(&args, lipschitz_fast);
    assert_eq!(clean.exit_code, EXIT_OK);
    assert_eq!(clean.results["trials"]["agreements"], 100);
}
