//! Shared generators for the integration tests: random graphs with and
//! without a known realization.

use edgp_core::graph::Edge;
use edgp_core::recovery::Realization;
use edgp_core::WeightedGraph;
use rand::Rng;

/// Connected graph whose weights are exact distances of random points,
/// so the instance is realizable and `truth` realizes it.
pub fn realizable_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    dim: usize,
    density: f64,
) -> (WeightedGraph, Realization) {
    let side = (n as f64).powf(1.0 / dim as f64);
    let coords: Vec<f64> = (0..n * dim).map(|_| rng.random_range(0.0..side)).collect();
    let truth = Realization::new(n, dim, coords);

    let mut pairs = std::collections::BTreeSet::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(density) {
                pairs.insert((u, v));
            }
        }
    }
    for v in 1..n {
        pairs.insert((rng.random_range(0..v), v));
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge::new(u, v, truth.distance(u, v)))
        .collect();
    (
        WeightedGraph::new(n, dim, edges).expect("valid edges"),
        truth,
    )
}

