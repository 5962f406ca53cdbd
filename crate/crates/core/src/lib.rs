//! Solver toolkit for the Euclidean distance geometry problem (EDGP).
//!
//! Given a simple undirected graph with nonnegative edge lengths and a target
//! dimension `K`, the EDGP asks for positions of the vertices in `R^K` such
//! that every edge is realized with its prescribed length. This crate builds
//! three optimization models for that problem and the machinery to solve and
//! score them:
//!
//! * [`formulations::build_edge`]: the classic model over vertex positions,
//!   with a centroid constraint pinning translations;
//! * [`formulations::build_cycle`]: a model over per-edge projected segment
//!   lengths, constrained to sum to zero around every cycle of a fundamental
//!   cycle basis, with the realization recovered afterwards by
//!   [`recovery::recover_realization`];
//! * [`formulations::build_euler`]: a relaxation that aggregates all cycle
//!   constraints into a single row along an Eulerian circuit and carries the
//!   vertex positions inside the model.
//!
//! The [`graph`] module owns the instance data model and the combinatorial
//! constructions (orientation, spanning forests, fundamental cycle bases,
//! block decomposition, Eulerization, circuit finding). The [`solver`] module
//! provides a projected limited-memory quasi-Newton method wrapped in a
//! MultiStart loop, and [`metrics`] the mean/largest distance error measures
//! used to compare solutions.

pub mod formulations;
pub mod graph;
pub mod metrics;
pub mod recovery;
pub mod solver;

pub use formulations::{FormulationInstance, FormulationKind, PointAssignment};
pub use graph::{ArcSet, CycleBasis, SignedCycle, WeightedGraph};
pub use metrics::QualityReport;
pub use recovery::Realization;
pub use solver::{SolveResult, SolverConfig};
