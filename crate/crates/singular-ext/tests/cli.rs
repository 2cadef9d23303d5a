//! End-to-end tests of the command-line interface: exit codes, report shape,
//! data files, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use singular_ext::config::{ComplexEntry, GramBlock, ModelConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singular-ext"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON report")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.json");
    std::fs::write(
        &path,
        ModelConfig::reference(300).canonical_json(),
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_gates_each_picture_by_its_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());

    let ok = run(&["check", "--config", &config]);
    assert!(ok.status.success());
    let report = stdout_json(&ok);
    assert_eq!(report["schema"], "singular-ext/1");
    assert_eq!(report["provenance"]["n"], 300);
    assert_eq!(report["provenance"]["model"], "b");
    assert_eq!(report["conditions"]["relationModelReady"], true);
    assert_eq!(report["conditions"]["gacomm"], false);
    assert!(report["reduced"]["deltaHat"].is_array());

    // The pairing Gram does not commute with the coordinate action, so the
    // operator picture is refused; the diagnostic report still prints.
    let refused = run(&["check", "--config", &config, "--model", "a"]);
    assert_eq!(refused.status.code(), Some(3));
    let report = stdout_json(&refused);
    assert_eq!(report["conditions"]["operatorModelReady"], false);
}

#[test]
fn malformed_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"schema": "other/9"}"#).unwrap();
    let out = run(&["check", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weyl_writes_the_grid_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let csv_path = dir.path().join("grid.csv");

    let out = run(&[
        "weyl",
        "--config",
        &config,
        "--grid",
        "im:0.5:2:3",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    let samples = report["weyl"]["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 3);
    assert!(samples.iter().all(|s| s["status"] == "ok"));
    assert_eq!(report["weyl"]["audit"]["negativeSquares"], 0);

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "z_re,z_im,q_0_0_re,q_0_0_im,r_0_0_re,r_0_0_im,m_0_0_re,m_0_0_im"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn weyl_flags_points_near_the_spectrum_without_aborting() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = run(&["weyl", "--config", &config, "--grid", "list:4,0;0,1"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    let samples = report["weyl"]["samples"].as_array().unwrap();
    assert!(samples[0]["status"].as_str().unwrap().starts_with("skipped"));
    assert_eq!(samples[1]["status"], "ok");
}

#[test]
fn resolvent_round_trips_and_embeds_the_residual() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());

    let full = run(&["resolvent", "--config", &config, "--grid", "list:0.3,1.2"]);
    assert!(full.status.success());
    let report = stdout_json(&full);
    let block = &report["resolvent"];
    assert_eq!(block["compressed"], false);
    assert_eq!(block["regular"].as_array().unwrap().len(), 300);
    assert!(block["residual"].as_f64().unwrap() <= 1e-10);

    let vec_path = dir.path().join("input.json");
    std::fs::write(&vec_path, "[1.0, [0.0, 0.5], 0.25]").unwrap();
    let out_path = dir.path().join("output.json");
    let compressed = run(&[
        "resolvent",
        "--config",
        &config,
        vec_path.to_str().unwrap(),
        "--compressed",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(compressed.status.success());
    let report = stdout_json(&compressed);
    assert_eq!(report["resolvent"]["compressed"], true);
    assert!(report["resolvent"]["residual"].as_f64().unwrap() <= 1e-8);

    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written["regular"], report["resolvent"]["regular"]);
}

#[test]
fn resolvent_on_the_spectrum_exits_with_code_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = run(&["resolvent", "--config", &config, "--grid", "list:4,0"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn seeded_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    for verb in ["pick", "verify"] {
        let first = run(&[verb, "--config", &config, "--seed", "9"]);
        let second = run(&[verb, "--config", &config, "--seed", "9"]);
        assert!(first.status.success(), "{verb} failed");
        assert_eq!(first.stdout, second.stdout, "{verb} output drifted");
    }
}

#[test]
fn verify_exits_with_code_5_when_a_suite_fails() {
    let dir = tempfile::tempdir().unwrap();

    // Explicit Gram equal to the pairing matrix with a bump on the adjacent
    // top-order pair: every suite but the Green identity survives.
    let base = ModelConfig::reference(300);
    let gram = base.build().unwrap().gram;
    let mut matrix = gram.matrix().clone();
    matrix[(0, 1)] += num_complex::Complex64::new(0.0, 0.05);
    matrix[(1, 0)] += num_complex::Complex64::new(0.0, -0.05);
    let rows: Vec<Vec<ComplexEntry>> = (0..matrix.nrows())
        .map(|i| (0..matrix.ncols()).map(|j| ComplexEntry(matrix[(i, j)])).collect())
        .collect();
    let broken = ModelConfig {
        gram: GramBlock::Explicit { matrix: rows },
        ..base
    };
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken.canonical_json()).unwrap();

    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    let report = stdout_json(&out);
    assert_eq!(report["verify"]["passed"], false);
    let suites = report["verify"]["suites"].as_array().unwrap();
    for suite in suites {
        let expect_pass = suite["name"] != "relation-green";
        assert_eq!(
            suite["passed"].as_bool().unwrap(),
            expect_pass,
            "suite {} unexpected outcome",
            suite["name"]
        );
    }
}

#[test]
fn verify_passes_on_the_reference_setup() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = run(&["verify", "--config", &config]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["verify"]["passed"], true);
    assert_eq!(report["verify"]["suites"].as_array().unwrap().len(), 10);
}
