mod common;

use std::f64::consts::PI;
use std::path::Path;

use bridgq::cli::run_from;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bridgq").chain(args.iter().copied());
    let code = run_from(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> String {
    common::fixture_path(name).to_string_lossy().into_owned()
}

fn masked_runs(dir: &Path) -> String {
    let text = std::fs::read_to_string(dir.join("runs.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let time_col = header.iter().position(|h| *h == "t_conv_ms").unwrap();
    text.lines()
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|&(i, _)| i != time_col)
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn parse_reports_structure() {
    let (code, out, _) = run(&["parse", &fixture("maxcut4.qasm")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "qubits=4 gates=7 slots=7 drivers=4 entanglers=3");
    let (code, out, _) = run(&["parse", &fixture("maxcut4.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("slots=7"));
}

#[test]
fn parse_failures_and_parameter_free_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qasm");
    std::fs::write(&bad, "OPENQASM 3.0;\nqubit[2] q;\nh q[0];\nwarp(1) q[1];\n").unwrap();
    let (code, _, err) = run(&["parse", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");

    let plain = dir.path().join("plain.qasm");
    std::fs::write(&plain, "qubit[2] q; h q[0]; cx q[0], q[1];").unwrap();
    let (code, out, _) = run(&["parse", plain.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("slots=0"));
}

#[test]
fn init_variants() {
    let (code, out, _) = run(&["init", &fixture("maxcut4.json"), "--variant", "beta-stratified", "--seed", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let params: Vec<f64> = serde_json::from_value(v["params"].clone()).unwrap();
    assert_eq!(params.len(), 7);
    assert!(params[..4].iter().all(|p| (-PI..=PI).contains(p)));
    assert!(params[4..].iter().all(|p| p.abs() <= 0.2));
    assert_eq!(v["variant"], "beta-stratified");
    assert_eq!(v["seed"], 3);
    assert!(v["alpha"].as_f64().unwrap() > 0.0);
    assert_eq!(v["fallback_used"], false);

    let (code2, out2, _) = run(&["init", &fixture("maxcut4.json"), "--variant", "beta-stratified", "--seed", "3"]);
    assert_eq!((code2, out2), (0, out));

    let dir = tempfile::tempdir().unwrap();
    let two = dir.path().join("two.qasm");
    std::fs::write(&two, "qubit[1] q; ry(0.3) q[0]; rz(0.1) q[0];").unwrap();
    let (code, out, _) = run(&["init", two.to_str().unwrap(), "--variant", "uniform"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let params: Vec<f64> = serde_json::from_value(v["params"].clone()).unwrap();
    assert!((params[0] + PI / 2.0).abs() < 1e-15 && (params[1] - PI / 2.0).abs() < 1e-15);
    assert!(v["alpha"].is_null());

    let (code, _, err) = run(&["init", &fixture("maxcut4_stripped.json"), "--variant", "agentq"]);
    assert_eq!(code, 1);
    assert!(err.contains("missing literals"), "{err}");
}

#[test]
fn run_emits_record() {
    let (code, out, _) = run(&["run", &fixture("maxcut4.json"), "--variant", "beta-stratified", "--seed", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    for field in ["gap_trajectory", "final_gap", "t_conv", "t_conv_ms", "converged", "iterations_executed", "fitted_prior"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }

    let (_, out, _) = run(&["run", &fixture("maxcut4.json"), "--variant", "random", "--max-iterations", "1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["gap_trajectory"].as_array().unwrap().len() <= 2);

    let (_, out, _) = run(&["run", &fixture("maxcut4.json"), "--variant", "random", "--learning-rate", "0", "--max-iterations", "5"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let traj: Vec<f64> = serde_json::from_value(v["gap_trajectory"].clone()).unwrap();
    assert!(traj.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bench_rejects_missing_baseline() {
    let (code, _, err) = run(&["bench", "--synthetic", "2", "--methods", "random,beta-pure"]);
    assert_eq!(code, 2);
    assert!(err.contains("baseline required for pairing"));
}

#[test]
fn bench_is_repeatable_and_reports_all_methods() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let (code, out, err) = run(&[
            "bench", "--synthetic", "3", "--nodes", "3-5", "--seeds", "1,2", "--max-iterations", "40",
            "--workers", "2", "--out", d.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("beta-best"));
    }
    assert_eq!(masked_runs(a.path()), masked_runs(b.path()));
    let summary = std::fs::read_to_string(a.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 7);
    assert!(a.path().join("trajectories/synthetic-42-0000.seed1.csv").exists());

    let (code, out, _) = run(&["report", a.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("beta-best")));
}

#[test]
fn gen_then_bench_directory() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("instances");
    let (code, out, _) = run(&["gen", "--count", "2", "--nodes", "4", "--seed", "5", "--out", inst.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(std::fs::read_dir(&inst).unwrap().count(), 2);
    let (code, out, err) = run(&["bench", inst.to_str().unwrap(), "--methods", "agentq,uniform", "--max-iterations", "20"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("kept"));

    let (code, _, _) = run(&["gen", "--count", "0", "--out", dir.path().join("none").to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["gen", "--count", "1", "--nodes", "2-4", "--out", inst.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["init", &fixture("maxcut4.json"), "--variant", "beta-best"]).0, 2);
    assert_eq!(run(&["bench"]).0, 2);
    let (code, out, _) = run(&["run", "--help"]);
    assert_eq!(code, 0);
    for default in ["[default: 400]", "[default: 0.05]", "[default: 0.2]", "[default: 0.4]"] {
        assert!(out.contains(default), "missing {default} in\n{out}");
    }
    let (_, out, _) = run(&["bench", "--help"]);
    assert!(out.contains("[default: 5]") && out.contains("--seeds"));
}
