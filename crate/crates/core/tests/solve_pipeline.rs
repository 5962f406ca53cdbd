//! End-to-end solves on small realizable instances: every formulation
//! should reach a near-exact realization, and repeated runs must agree
//! bit for bit.

mod util;

use edgp_core::formulations::{build_cycle, build_edge, build_euler, PointAssignment};
use edgp_core::graph::{
    euler_circuit, eulerize, fundamental_cycle_basis, orient, spanning_forest,
    two_path_replacement,
};
use edgp_core::metrics::mde;
use edgp_core::recovery::{recover_realization, residual_check, RecoveryMode, Realization};
use edgp_core::solver::{multistart, SolverConfig};
use edgp_core::WeightedGraph;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn config(starts: usize, seed: u64) -> SolverConfig {
    SolverConfig {
        starts,
        seed,
        ..SolverConfig::default()
    }
}

fn x_realization(g: &WeightedGraph, p: &PointAssignment) -> Realization {
    let mut x = Realization::zeros(g.vertex_count(), g.dim());
    for i in 0..g.vertex_count() {
        for k in 0..g.dim() {
            x.set_coord(i, k, p.x(i, k));
        }
    }
    x
}

#[test]
fn edge_formulation_realizes_small_instances() {
    let mut rng = StdRng::seed_from_u64(81);
    let mut solved = 0;
    for _ in 0..5 {
        let (g, _) = util::realizable_graph(&mut rng, 8, 2, 0.7);
        let f = build_edge(&g);
        let result = multistart(&f, &config(30, 11)).unwrap();
        let x = x_realization(&g, &result.best);
        if mde(&x, &g) <= 1e-3 {
            solved += 1;
        }
    }
    assert!(solved >= 4, "edge formulation solved only {solved}/5");
}

#[test]
fn cycle_formulation_plus_recovery_realizes_small_instances() {
    let mut rng = StdRng::seed_from_u64(82);
    let mut solved = 0;
    for _ in 0..5 {
        let (g, _) = util::realizable_graph(&mut rng, 8, 2, 0.7);
        let arcs = orient(&g);
        let basis = fundamental_cycle_basis(&g, &arcs, &spanning_forest(&g));
        let f = build_cycle(&g, &arcs, &basis);
        let result = multistart(&f, &config(30, 12)).unwrap();

        let rec = recover_realization(&g, &arcs, result.best.values(), RecoveryMode::LeastSquares);
        // The y solution is basis-feasible, so the linear system is
        // consistent and recovery reproduces it almost exactly.
        let (max_residual, _) = residual_check(&g, &arcs, &rec.realization, result.best.values());
        if result.best_objective <= 1e-12 {
            assert!(
                max_residual <= 1e-6,
                "feasible y must recover consistently, residual {max_residual}"
            );
        }
        if mde(&rec.realization, &g) <= 1e-3 {
            solved += 1;
        }
    }
    assert!(solved >= 4, "cycle formulation solved only {solved}/5");
}

#[test]
fn euler_relaxation_realizes_small_instances() {
    let mut rng = StdRng::seed_from_u64(83);
    let mut solved = 0;
    for _ in 0..5 {
        let (g, _) = util::realizable_graph(&mut rng, 7, 2, 0.7);
        let arcs = orient(&g);
        let h = eulerize(&g).unwrap();
        let circuit = euler_circuit(&g, &h).unwrap();
        let structure = two_path_replacement(&g, &arcs, &h, &circuit);
        let f = build_euler(&g, &arcs, &structure);
        let result = multistart(&f, &config(40, 13)).unwrap();
        let x = x_realization(&g, &result.best);
        if mde(&x, &g) <= 1e-3 {
            solved += 1;
        }
    }
    // The relaxation drops most cycle constraints, so its minima are not
    // always realizations; it still succeeds regularly on small graphs.
    assert!(solved >= 3, "euler relaxation solved only {solved}/5");
}

#[test]
fn repeated_solves_are_bitwise_identical() {
    let mut rng = StdRng::seed_from_u64(84);
    let (g, _) = util::realizable_graph(&mut rng, 9, 3, 0.5);
    let arcs = orient(&g);
    let basis = fundamental_cycle_basis(&g, &arcs, &spanning_forest(&g));
    let f = build_cycle(&g, &arcs, &basis);

    let a = multistart(&f, &config(10, 5)).unwrap();
    let b = multistart(&f, &config(10, 5)).unwrap();
    assert_eq!(a.best_objective.to_bits(), b.best_objective.to_bits());
    assert_eq!(a.best.values().len(), b.best.values().len());
    for (x, y) in a.best.values().iter().zip(b.best.values()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }

    let ra = recover_realization(&g, &arcs, a.best.values(), RecoveryMode::LeastSquares);
    let rb = recover_realization(&g, &arcs, b.best.values(), RecoveryMode::LeastSquares);
    for (x, y) in ra.realization.as_slice().iter().zip(rb.realization.as_slice()) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn objective_improves_monotonically_over_starts_best() {
    let mut rng = StdRng::seed_from_u64(85);
    let (g, _) = util::realizable_graph(&mut rng, 8, 2, 0.6);
    let f = build_edge(&g);
    let result = multistart(&f, &config(15, 9)).unwrap();

    // The reported best is the running minimum of the per-start records.
    let mut running = f64::INFINITY;
    for record in &result.starts {
        running = running.min(record.objective);
    }
    assert_eq!(result.best_objective, running);
    assert!(result.wall_seconds >= 0.0);
}
