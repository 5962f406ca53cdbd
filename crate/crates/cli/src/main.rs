use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use edgp_cli::report::{render_report, write_report, ReportFormat};
use edgp_cli::run::{run_benchmark, BenchStatus, ExperimentSpec, InstanceSource};
use edgp_cli::generate::generate_instance;
use edgp_core::formulations::FormulationKind;
use edgp_core::graph::{
    euler_circuit, eulerize, fundamental_cycle_basis, orient, parse_instance, spanning_forest,
    two_path_replacement, verify_cycle, write_instance, Instance,
};
use edgp_core::recovery::RecoveryMode;
use edgp_core::solver::SolverConfig;
use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "edgp",
    about = "Distance geometry solver: realize weighted graphs in K dimensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve instance files and write a quality report.
    Solve(SolveArgs),
    /// Generate a random realizable instance.
    Generate(GenerateArgs),
    /// Check structural invariants of instance files.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file in the `n m K` text format; repeatable.
    #[arg(long, required = true)]
    instance: Vec<PathBuf>,
    /// Formulation to run (edge|cycle|euler); repeatable. All three when
    /// omitted.
    #[arg(long)]
    formulation: Vec<FormulationKind>,
    /// Local solves per formulation.
    #[arg(long, default_value_t = 10)]
    starts: usize,
    /// Seed for start sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per start; defaults to 5x the variable count.
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
    /// Stopping tolerance on the projected gradient step.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Realization recovery for the cycle formulation (ls|l1).
    #[arg(long, default_value = "ls")]
    recovery: RecoveryMode,
    /// Report file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format (csv|json-lines).
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
}

#[derive(Args)]
struct GenerateArgs {
    /// Vertex count, at least 2.
    #[arg(long)]
    n: usize,
    /// Embedding dimension.
    #[arg(long = "K")]
    k: usize,
    /// Probability of keeping each vertex pair, in (0, 1].
    #[arg(long)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file to write; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file to check; repeatable.
    #[arg(long, required = true)]
    instance: Vec<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Generate(args) => generate(args),
        Command::Verify(args) => verify(args),
    }
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let formulations = if args.formulation.is_empty() {
        vec![
            FormulationKind::Edge,
            FormulationKind::Cycle,
            FormulationKind::Euler,
        ]
    } else {
        args.formulation
    };
    let spec = ExperimentSpec {
        sources: args.instance.into_iter().map(InstanceSource::Path).collect(),
        formulations,
        solver: SolverConfig {
            starts: args.starts,
            seed: args.seed,
            max_iterations: args.max_iters,
            gradient_tolerance: args.tol,
            ..SolverConfig::default()
        },
        recovery: args.recovery,
        output: args.out,
        format: args.format,
    };
    let records = run_benchmark(&spec)?;
    match &spec.output {
        Some(path) => write_report(&records, spec.format, path)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{}", render_report(&records, spec.format)),
    }
    let failed = records.iter().filter(|r| r.status == BenchStatus::Failed).count();
    if failed > 0 {
        eprintln!("{failed} of {} records failed", records.len());
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    anyhow::ensure!(args.n >= 2, "--n must be at least 2");
    anyhow::ensure!(args.k >= 1, "--K must be at least 1");
    anyhow::ensure!(
        args.density > 0.0 && args.density <= 1.0,
        "--density must lie in (0, 1]"
    );
    let instance = generate_instance(args.n, args.k, args.density, args.seed);
    let text = write_instance(&instance);
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let mut failures = 0;
    for path in &args.instance {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let instance = match parse_instance(&text) {
            Ok(i) => i,
            Err(e) => {
                println!("{}: parse FAILED: {e}", path.display());
                failures += 1;
                continue;
            }
        };
        for (check, outcome) in instance_checks(&instance) {
            match outcome {
                Ok(detail) => println!("{}: {check} ok ({detail})", path.display()),
                Err(why) => {
                    println!("{}: {check} FAILED: {why}", path.display());
                    failures += 1;
                }
            }
        }
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

/// The three structural checks behind `edgp verify`, as (name, outcome)
/// pairs; `Ok` carries a human-readable detail.
fn instance_checks(instance: &Instance) -> Vec<(&'static str, Result<String, String>)> {
    let g = &instance.graph;
    let arcs = orient(g);
    let mut checks = Vec::new();

    let basis = fundamental_cycle_basis(g, &arcs, &spanning_forest(g));
    let expected = g.edge_count() + g.component_count() - g.vertex_count();
    let basis_outcome = if basis.cycles().len() != expected {
        Err(format!(
            "expected {expected} basis cycles, found {}",
            basis.cycles().len()
        ))
    } else if let Some(bad) = basis.cycles().iter().position(|c| !verify_cycle(g, &arcs, c)) {
        Err(format!("basis cycle {bad} does not conserve flow"))
    } else {
        Ok(format!("{expected} cycles"))
    };
    checks.push(("cycle basis", basis_outcome));

    let euler_outcome = if !g.is_connected() {
        Ok("skipped, graph disconnected".to_string())
    } else {
        euler_check(g, &arcs)
    };
    checks.push(("euler structure", euler_outcome));

    let round_trip = match parse_instance(&write_instance(instance)) {
        Ok(again) if &again == instance => Ok("write/parse identity".to_string()),
        Ok(_) => Err("reparsed instance differs".to_string()),
        Err(e) => Err(format!("rendered instance fails to parse: {e}")),
    };
    checks.push(("round trip", round_trip));
    checks
}

fn euler_check(g: &edgp_core::WeightedGraph, arcs: &edgp_core::ArcSet) -> Result<String, String> {
    let multi = eulerize(g).map_err(|e| e.to_string())?;
    let mut degree = vec![0usize; g.vertex_count()];
    for (e, &h) in multi.iter().enumerate() {
        degree[g.edge(e).u] += h;
        degree[g.edge(e).v] += h;
    }
    if let Some(v) = degree.iter().position(|d| d % 2 != 0) {
        return Err(format!("vertex {v} has odd degree after eulerization"));
    }

    let circuit = euler_circuit(g, &multi).map_err(|e| e.to_string())?;
    let total: usize = multi.iter().sum();
    if circuit.len() != total {
        return Err(format!(
            "circuit has {} arcs, multigraph has {total} edges",
            circuit.len()
        ));
    }
    let mut seen = HashSet::new();
    for arc in &circuit {
        if !seen.insert((arc.edge, arc.copy)) {
            return Err(format!("edge {} copy {} traversed twice", arc.edge, arc.copy));
        }
    }
    for (prev, next) in circuit.iter().zip(circuit.iter().cycle().skip(1)).take(circuit.len()) {
        if prev.head != next.tail {
            return Err("circuit is not a closed walk".to_string());
        }
    }

    let structure = two_path_replacement(g, arcs, &multi, &circuit);
    let mut arcs_seen = HashSet::new();
    for &(tail, head) in structure.replaced_circuit() {
        if tail == head {
            return Err(format!("replacement kept a self-loop at {tail}"));
        }
        if !arcs_seen.insert((tail.min(head), tail.max(head))) {
            return Err(format!("replacement left parallel arcs between {tail} and {head}"));
        }
    }
    Ok(format!(
        "{} circuit arcs, {} added vertices",
        circuit.len(),
        structure.added_vertices().len()
    ))
}
