//! Synthetic realizable instances: random points, random edges, exact
//! distances.

use edgp_core::graph::{Edge, Instance, WeightedGraph};
use edgp_core::recovery::Realization;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Samples `n` points uniformly in a cube of side `n^(1/dim)`, keeps each
/// vertex pair as an edge with probability `density`, and adds the edges
/// of a random spanning tree so the graph is always connected. Weights
/// are the exact point distances, so the instance is realizable by
/// construction and the sampled points ship as its ground truth.
///
/// The generator is a pure function of its arguments: the same call
/// produces the same instance, byte for byte once written.
pub fn generate_instance(n: usize, dim: usize, density: f64, seed: u64) -> Instance {
    assert!(n >= 2, "need at least two vertices");
    assert!(dim >= 1, "need at least one dimension");
    assert!(
        density > 0.0 && density <= 1.0,
        "density must lie in (0, 1]"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (n as f64).powf(1.0 / dim as f64);

    let mut truth = Realization::zeros(n, dim);
    for i in 0..n {
        for k in 0..dim {
            truth.set_coord(i, k, rng.random_range(0.0..side));
        }
    }

    // Pair coin flips in lexicographic order, then the connecting tree:
    // vertex v attaches to a uniform earlier vertex. Both phases draw
    // from the generator in a fixed order, which keeps output stable.
    let mut pairs = BTreeSet::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(density) {
                pairs.insert((u, v));
            }
        }
    }
    for v in 1..n {
        let parent = rng.random_range(0..v);
        pairs.insert((parent, v));
    }

    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge::new(u, v, truth.distance(u, v)))
        .collect();
    let graph = WeightedGraph::new(n, dim, edges).expect("generated edges are valid");
    Instance {
        graph,
        ground_truth: Some(truth),
    }
}
