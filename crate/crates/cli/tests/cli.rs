// Copyright 2026 The geodesic-gate Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use geodesic_core::{BatchSummary, RunRecord};

fn geogate(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geogate"))
        .current_dir(dir)
        .env_remove("GEOGATE_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(path: &Path) -> Vec<RunRecord> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| RunRecord::from_json(l).unwrap())
        .collect()
}

#[test]
fn toffoli_synth_converges_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = geogate(dir.path(), &["synth", "--target", "toffoli", "--method", "geodesic", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&dir.path().join("runs.jsonl"));
    assert_eq!(recs.len(), 1);
    assert!(recs[0].converged);
    assert_eq!(recs[0].seed, 7);

    let verify = geogate(dir.path(), &["verify", "--params", "runs.jsonl", "--target", "toffoli"]);
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = geogate(
        dir.path(),
        &["synth", "--target", "fredkin", "--method", "gd", "--max-steps", "3", "--out", "r.jsonl"],
    );
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&dir.path().join("r.jsonl"));
    assert!(!recs[0].converged);
    assert_eq!(recs[0].steps, 3);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("not_unitary.json"),
        r#"{"n": 1, "matrix": [[1, 0], [1, 0], [0, 0], [1, 0]]}"#,
    )
    .unwrap();
    for args in [
        &["synth", "--target", "file:not_unitary.json"][..],
        &["synth", "--target", "toffoli", "--method", "annealing"],
        &["synth", "--target", "toffoli", "--method", "gd", "--ansatz", "on"],
        &["synth", "--target", "wz:1"],
        &["synth", "--bogus"],
        &["synth"],
        &["batch", "--target", "toffoli", "--bins", "log:0"],
    ] {
        let out = geogate(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let help = geogate(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn verify_zero_and_mismatched_params() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("zero.json"), r#"{"XII": 0.0}"#).unwrap();
    std::fs::write(dir.path().join("short.json"), r#"{"XZ": 0.25}"#).unwrap();
    let zero = geogate(dir.path(), &["verify", "--params", "zero.json", "--target", "toffoli"]);
    assert_eq!(zero.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&zero.stdout).contains("3.070"));
    let short = geogate(dir.path(), &["verify", "--params", "short.json", "--target", "toffoli"]);
    assert_eq!(short.status.code(), Some(1));
}

#[test]
fn gates_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = geogate(dir.path(), &["gates"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("toffoli n=3 N=8"));
    assert!(text.contains("n=3 two-local=36"));
}

#[test]
fn config_file_and_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "target = \"wz:2\"\nseed = 1\neps = 0.01\nmax_steps = 200\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_geogate"))
        .current_dir(dir.path())
        .env("GEOGATE_OUT_DIR", "records")
        .args(["synth", "--config", "run.toml", "--seed", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = &records(&dir.path().join("records/runs.jsonl"))[0];
    assert_eq!(rec.seed, 4);
    assert_eq!(rec.config.epsilon(), 0.01);
    assert_eq!(rec.target, "wz:2");

    std::fs::write(dir.path().join("bad.toml"), "taget = \"wz:2\"\n").unwrap();
    let bad = geogate(dir.path(), &["synth", "--config", "bad.toml"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn batch_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, parallel: &str| {
        let out = geogate(
            dir.path(),
            &[
                "batch", "--target", "wz:2", "--seeds", "8", "--parallel", parallel, "--out",
                &format!("{name}.jsonl"), "--csv", &format!("{name}.csv"), "--runs-csv",
                &format!("{name}_runs.csv"),
            ],
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(dir.path().join(format!("{name}.summary.json"))).unwrap();
        BatchSummary::from_json(&text).unwrap()
    };
    let a = run("a", "4");
    let b = run("b", "1");
    assert_eq!(a, b);
    assert_eq!(a.seeds, 8);
    assert_eq!(a.histogram.total(), 8);
    assert_eq!(records(&dir.path().join("a.jsonl")).len(), 8);
    let hist = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert!(hist.starts_with("bin,lo,hi,count"));
    assert!(hist.contains("unconverged"));
    let runs = std::fs::read_to_string(dir.path().join("a_runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 9);
}
