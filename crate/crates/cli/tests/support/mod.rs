//! Oracles for the acceptance suite, implemented independently of the
//! library code they check.

use edgp_core::graph::Edge;
use edgp_core::WeightedGraph;
use rand::Rng;

/// Every simple cycle of the graph as a closed vertex walk (the final
/// hop back to the first vertex is implied). Each cycle is reported
/// once: walks start at their smallest vertex and the second vertex is
/// smaller than the last, which fixes one of the two directions.
pub fn simple_cycles(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for root in 0..n {
        path.push(root);
        on_path[root] = true;
        extend(root, root, &adj, &mut path, &mut on_path, &mut cycles);
        on_path[root] = false;
        path.pop();
    }
    cycles
}

fn extend(
    root: usize,
    v: usize,
    adj: &[Vec<(usize, usize)>],
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    cycles: &mut Vec<Vec<usize>>,
) {
    for &(w, _) in &adj[v] {
        if w == root && path.len() >= 3 && path[1] < path[path.len() - 1] {
            cycles.push(path.clone());
        } else if w > root && !on_path[w] {
            path.push(w);
            on_path[w] = true;
            extend(root, w, adj, path, on_path, cycles);
            on_path[w] = false;
            path.pop();
        }
    }
}

/// Sparse random graph with expected average degree about `degree`;
/// possibly disconnected, weights in [0.5, 2).
pub fn sparse_graph<R: Rng>(rng: &mut R, n: usize, degree: f64) -> WeightedGraph {
    let p = (degree / (n as f64 - 1.0)).min(1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                edges.push(Edge::new(u, v, rng.random_range(0.5..2.0)));
            }
        }
    }
    WeightedGraph::new(n, 3, edges).expect("valid edges")
}

/// Like [`sparse_graph`] but with a random spanning tree added, so the
/// result is connected.
pub fn sparse_connected_graph<R: Rng>(rng: &mut R, n: usize, degree: f64) -> WeightedGraph {
    let base = sparse_graph(rng, n, degree);
    let mut pairs: std::collections::BTreeSet<(usize, usize)> = base
        .edges()
        .iter()
        .map(|e| (e.u.min(e.v), e.u.max(e.v)))
        .collect();
    for v in 1..n {
        pairs.insert((rng.random_range(0..v), v));
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            base.edge_between(u, v)
                .map(|e| *base.edge(e))
                .unwrap_or_else(|| Edge::new(u, v, rng.random_range(0.5..2.0)))
        })
        .collect();
    WeightedGraph::new(n, 3, edges).expect("valid edges")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, pairs: &[(usize, usize)]) -> WeightedGraph {
        let edges = pairs.iter().map(|&(u, v)| Edge::new(u, v, 1.0)).collect();
        WeightedGraph::new(n, 2, edges).unwrap()
    }

    #[test]
    fn triangle_has_one_simple_cycle() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(simple_cycles(&g), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn k4_has_seven_simple_cycles() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        // Four triangles plus three quadrilaterals.
        assert_eq!(simple_cycles(&g).len(), 7);
    }

    #[test]
    fn trees_have_no_simple_cycles() {
        let g = graph(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert!(simple_cycles(&g).is_empty());
    }
}
