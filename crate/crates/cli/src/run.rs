//! Experiment orchestration: build each formulation, solve, recover where
//! needed, and measure quality against the instance weights.

use crate::generate::generate_instance;
use edgp_core::formulations::{build_cycle, build_edge, build_euler, FormulationKind};
use edgp_core::graph::{
    euler_circuit, eulerize, fundamental_cycle_basis, orient, parse_instance, spanning_forest,
    two_path_replacement, Instance,
};
use edgp_core::metrics::quality;
use edgp_core::recovery::{recover_realization, Realization, RecoveryMode};
use edgp_core::solver::{multistart, SolverConfig};
use edgp_core::{PointAssignment, WeightedGraph};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

/// Where an experiment's instances come from.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    /// A file in the `n m K` text format.
    Path(PathBuf),
    /// Parameters for [`generate_instance`].
    Generated {
        n: usize,
        dim: usize,
        density: f64,
        seed: u64,
    },
}

/// One benchmark run: instances crossed with formulations under a shared
/// solver configuration.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub sources: Vec<InstanceSource>,
    pub formulations: Vec<FormulationKind>,
    pub solver: SolverConfig,
    pub recovery: RecoveryMode,
    /// Report destination; `None` means the caller prints it.
    pub output: Option<PathBuf>,
    pub format: crate::report::ReportFormat,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read {path}")]
    Unreadable {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}")]
    Unparseable {
        path: PathBuf,
        source: edgp_core::graph::ParseError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchStatus {
    Ok,
    /// The Eulerian build needs a connected graph; the record is kept so
    /// the gap is visible in reports.
    SkippedDisconnected,
    /// Every solver start aborted.
    Failed,
}

impl BenchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchStatus::Ok => "ok",
            BenchStatus::SkippedDisconnected => "skipped-disconnected",
            BenchStatus::Failed => "failed",
        }
    }
}

impl fmt::Display for BenchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BenchStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ok" => Ok(BenchStatus::Ok),
            "skipped-disconnected" => Ok(BenchStatus::SkippedDisconnected),
            "failed" => Ok(BenchStatus::Failed),
            other => Err(format!("unknown status `{other}`")),
        }
    }
}

mod kind_as_str {
    use edgp_core::formulations::FormulationKind;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(kind: &FormulationKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(kind.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FormulationKind, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// One (instance, formulation) measurement. Quality columns are `None`
/// when the run did not produce a realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    #[serde(with = "kind_as_str")]
    pub formulation: FormulationKind,
    pub mde: Option<f64>,
    pub lde: Option<f64>,
    pub objective: Option<f64>,
    /// Wall time of the solve pipeline: multistart, plus recovery for the
    /// cycle formulation. Parsing and reporting are excluded.
    pub cpu_seconds: f64,
    pub starts_used: usize,
    pub seed: u64,
    pub status: BenchStatus,
}

/// Runs every requested formulation on every instance. Individual solves
/// that fail are recorded with [`BenchStatus::Failed`] and the run
/// continues; only unusable instance files abort. Records come back
/// sorted by (instance, formulation).
pub fn run_benchmark(spec: &ExperimentSpec) -> Result<Vec<BenchRecord>, BenchError> {
    let mut named = Vec::new();
    for source in &spec.sources {
        named.push(load_source(source)?);
    }

    let mut records = Vec::new();
    for (name, instance) in &named {
        for &kind in &spec.formulations {
            records.push(run_one(name, instance, kind, spec));
        }
    }
    records.sort_by(|a, b| {
        (a.instance.as_str(), a.formulation.as_str())
            .cmp(&(b.instance.as_str(), b.formulation.as_str()))
    });
    Ok(records)
}

fn load_source(source: &InstanceSource) -> Result<(String, Instance), BenchError> {
    match source {
        InstanceSource::Path(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| BenchError::Unreadable {
                path: path.clone(),
                source: e,
            })?;
            let instance = parse_instance(&text).map_err(|e| BenchError::Unparseable {
                path: path.clone(),
                source: e,
            })?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            Ok((name, instance))
        }
        InstanceSource::Generated {
            n,
            dim,
            density,
            seed,
        } => {
            let name = format!("gen-n{n}-k{dim}-d{density}-s{seed}");
            Ok((name, generate_instance(*n, *dim, *density, *seed)))
        }
    }
}

fn run_one(
    name: &str,
    instance: &Instance,
    kind: FormulationKind,
    spec: &ExperimentSpec,
) -> BenchRecord {
    let g = &instance.graph;
    let mut record = BenchRecord {
        instance: name.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        formulation: kind,
        mde: None,
        lde: None,
        objective: None,
        cpu_seconds: 0.0,
        starts_used: 0,
        seed: spec.solver.seed,
        status: BenchStatus::Ok,
    };

    if kind == FormulationKind::Euler && !g.is_connected() {
        record.status = BenchStatus::SkippedDisconnected;
        return record;
    }

    let arcs = orient(g);
    let f = match kind {
        FormulationKind::Edge => build_edge(g),
        FormulationKind::Cycle => {
            let basis = fundamental_cycle_basis(g, &arcs, &spanning_forest(g));
            build_cycle(g, &arcs, &basis)
        }
        FormulationKind::Euler => {
            let multi = eulerize(g).expect("connectivity checked above");
            let circuit = euler_circuit(g, &multi).expect("eulerized graph has a circuit");
            let structure = two_path_replacement(g, &arcs, &multi, &circuit);
            build_euler(g, &arcs, &structure)
        }
    };

    let clock = Instant::now();
    let solved = multistart(&f, &spec.solver);
    let result = match solved {
        Ok(r) => r,
        Err(_) => {
            record.cpu_seconds = clock.elapsed().as_secs_f64();
            record.status = BenchStatus::Failed;
            return record;
        }
    };

    let x = match kind {
        // The cycle formulation has no point variables; the realization
        // comes out of the recovery stage, which the clock includes.
        FormulationKind::Cycle => {
            let y = result.best.values();
            recover_realization(g, &arcs, y, spec.recovery).realization
        }
        _ => x_block(g, &result.best),
    };
    record.cpu_seconds = clock.elapsed().as_secs_f64();

    let report = quality(&x, g, result.best_objective);
    record.mde = Some(report.mde);
    record.lde = Some(report.lde);
    record.objective = Some(result.best_objective);
    record.starts_used = result.starts.len();
    record
}

/// Reads the point block of a solution into a realization.
fn x_block(g: &WeightedGraph, p: &PointAssignment) -> Realization {
    let mut x = Realization::zeros(g.vertex_count(), g.dim());
    for i in 0..g.vertex_count() {
        for k in 0..g.dim() {
            x.set_coord(i, k, p.x(i, k));
        }
    }
    x
}
