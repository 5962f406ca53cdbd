//! End-to-end checks of the command-line pipeline: generation, solving,
//! reporting, and the binary itself.

use edgp_cli::generate::generate_instance;
use edgp_cli::report::{parse_report, render_report, ReportFormat};
use edgp_cli::run::{run_benchmark, BenchStatus, ExperimentSpec, InstanceSource};
use edgp_core::formulations::FormulationKind;
use edgp_core::graph::write_instance;
use edgp_core::recovery::RecoveryMode;
use edgp_core::solver::SolverConfig;
use std::process::Command;

fn small_spec(sources: Vec<InstanceSource>) -> ExperimentSpec {
    ExperimentSpec {
        sources,
        formulations: vec![
            FormulationKind::Edge,
            FormulationKind::Cycle,
            FormulationKind::Euler,
        ],
        solver: SolverConfig {
            starts: 15,
            seed: 4,
            ..SolverConfig::default()
        },
        recovery: RecoveryMode::LeastSquares,
        output: None,
        format: ReportFormat::Csv,
    }
}

#[test]
fn benchmark_records_survive_both_report_formats() {
    let spec = small_spec(vec![
        InstanceSource::Generated {
            n: 7,
            dim: 2,
            density: 0.6,
            seed: 1,
        },
        InstanceSource::Generated {
            n: 9,
            dim: 2,
            density: 0.5,
            seed: 2,
        },
    ]);
    let records = run_benchmark(&spec).unwrap();
    assert_eq!(records.len(), 6);

    for format in [ReportFormat::Csv, ReportFormat::JsonLines] {
        let text = render_report(&records, format);
        let back = parse_report(&text, format).unwrap();
        assert_eq!(back, records, "{format:?} must round trip");
    }
}

#[test]
fn solved_yes_instances_reach_small_distance_errors() {
    let spec = small_spec(vec![InstanceSource::Generated {
        n: 8,
        dim: 2,
        density: 0.6,
        seed: 3,
    }]);
    let records = run_benchmark(&spec).unwrap();
    let solved = records
        .iter()
        .filter(|r| r.status == BenchStatus::Ok && r.mde.unwrap() <= 1e-3)
        .count();
    assert!(solved >= 2, "{solved}/3 formulations realized the instance");
}

#[test]
fn generated_files_are_bitwise_reproducible() {
    let a = write_instance(&generate_instance(18, 3, 0.5, 99));
    let b = write_instance(&generate_instance(18, 3, 0.5, 99));
    assert_eq!(a, b);
}

fn edgp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edgp"))
}

#[test]
fn binary_generates_solves_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let instance_path = dir.path().join("instance.txt");
    let report_path = dir.path().join("report.csv");

    let status = edgp()
        .args(["generate", "--n", "8", "--K", "2", "--density", "0.6"])
        .args(["--seed", "5", "--out"])
        .arg(&instance_path)
        .status()
        .unwrap();
    assert!(status.success());

    let status = edgp()
        .arg("verify")
        .arg("--instance")
        .arg(&instance_path)
        .status()
        .unwrap();
    assert!(status.success());

    let status = edgp()
        .arg("solve")
        .arg("--instance")
        .arg(&instance_path)
        .args(["--formulation", "edge", "--formulation", "cycle"])
        .args(["--starts", "10", "--seed", "1", "--out"])
        .arg(&report_path)
        .status()
        .unwrap();
    assert!(status.success());

    let text = std::fs::read_to_string(&report_path).unwrap();
    let records = parse_report(&text, ReportFormat::Csv).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records.iter().all(|r| r.status == BenchStatus::Ok));
}

#[test]
fn binary_rejects_a_malformed_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.txt");
    std::fs::write(&path, "not a header\n").unwrap();

    let output = edgp()
        .arg("solve")
        .arg("--instance")
        .arg(&path)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("broken.txt"), "stderr was: {stderr}");
}

#[test]
fn binary_writes_csv_to_stdout_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let instance_path = dir.path().join("instance.txt");
    std::fs::write(
        &instance_path,
        write_instance(&generate_instance(6, 2, 0.8, 7)),
    )
    .unwrap();

    let output = edgp()
        .arg("solve")
        .arg("--instance")
        .arg(&instance_path)
        .args(["--formulation", "edge", "--starts", "5"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.starts_with("instance,"));
    let records = parse_report(&stdout, ReportFormat::Csv).unwrap();
    assert_eq!(records.len(), 1);
}
