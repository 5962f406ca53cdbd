//! Solution quality: mean and largest absolute distance error.
//!
//! Errors are measured on distances, not squared distances, so they are
//! directly comparable across instances even though the optimization
//! objectives work with squared-length residuals.

use crate::graph::WeightedGraph;
use crate::recovery::Realization;

/// Per-edge error summary of a realization against the target lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    /// Mean of `per_edge_errors`, 0 for edgeless graphs.
    pub mde: f64,
    /// Max of `per_edge_errors`, 0 for edgeless graphs.
    pub lde: f64,
    /// Objective value reported by whoever produced the realization;
    /// carried through verbatim.
    pub objective: f64,
    /// `| ||x_i - x_j|| - d_ij |` per edge, in edge order.
    pub per_edge_errors: Vec<f64>,
}

fn per_edge_errors(x: &Realization, g: &WeightedGraph) -> Vec<f64> {
    assert_eq!(x.vertex_count(), g.vertex_count());
    assert_eq!(x.dim(), g.dim());
    g.edges()
        .iter()
        .map(|e| (x.distance(e.u, e.v) - e.weight).abs())
        .collect()
}

/// Mean absolute distance error over the edges.
pub fn mde(x: &Realization, g: &WeightedGraph) -> f64 {
    let errors = per_edge_errors(x, g);
    if errors.is_empty() {
        0.0
    } else {
        errors.iter().sum::<f64>() / errors.len() as f64
    }
}

/// Largest absolute distance error over the edges.
pub fn lde(x: &Realization, g: &WeightedGraph) -> f64 {
    per_edge_errors(x, g).into_iter().fold(0.0, f64::max)
}

/// Bundles both measures with the per-edge breakdown they derive from.
pub fn quality(x: &Realization, g: &WeightedGraph, objective: f64) -> QualityReport {
    let per_edge = per_edge_errors(x, g);
    let mde = if per_edge.is_empty() {
        0.0
    } else {
        per_edge.iter().sum::<f64>() / per_edge.len() as f64
    };
    let lde = per_edge.iter().copied().fold(0.0, f64::max);
    assert!(lde >= mde, "max dominates mean");
    QualityReport {
        mde,
        lde,
        objective,
        per_edge_errors: per_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn single_edge() -> WeightedGraph {
        WeightedGraph::new(2, 2, vec![Edge::new(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn exact_realization_scores_zero() {
        let g = WeightedGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 1, 3.0),
                Edge::new(1, 2, 4.0),
                Edge::new(0, 2, 5.0),
            ],
        )
        .unwrap();
        let x = Realization::new(3, 2, vec![0.0, 0.0, 3.0, 0.0, 3.0, 4.0]);
        assert_eq!(mde(&x, &g), 0.0);
        assert_eq!(lde(&x, &g), 0.0);
        let q = quality(&x, &g, 0.0);
        assert_eq!(q.per_edge_errors, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_edge_stretched_by_half() {
        let g = single_edge();
        let x = Realization::new(2, 2, vec![0.0, 0.0, 1.5, 0.0]);
        assert!((mde(&x, &g) - 0.5).abs() < 1e-15);
        assert!((lde(&x, &g) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mean_and_max_differ_on_a_path() {
        // Two edges with errors 0.2 and 0.6.
        let g = WeightedGraph::new(
            3,
            1,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)],
        )
        .unwrap();
        let x = Realization::new(3, 1, vec![0.0, 1.2, 2.8]);
        assert!((mde(&x, &g) - 0.4).abs() < 1e-12);
        assert!((lde(&x, &g) - 0.6).abs() < 1e-12);
        let q = quality(&x, &g, 1.0);
        assert!(q.lde >= q.mde);
        assert_eq!(q.objective, 1.0);
    }

    #[test]
    fn report_is_internally_consistent() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        let g = WeightedGraph::new(
            4,
            3,
            vec![
                Edge::new(0, 1, 1.0),
                Edge::new(1, 2, 2.0),
                Edge::new(2, 3, 0.5),
                Edge::new(0, 3, 1.5),
                Edge::new(0, 2, 2.5),
            ],
        )
        .unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let coords: Vec<f64> = (0..12).map(|_| rng.random_range(-2.0..2.0)).collect();
            let x = Realization::new(4, 3, coords);
            let q = quality(&x, &g, 0.0);
            let recomputed_max = q.per_edge_errors.iter().copied().fold(0.0, f64::max);
            assert_eq!(q.lde, recomputed_max);
            let sum: f64 = q.per_edge_errors.iter().sum();
            assert!((q.mde * g.edge_count() as f64 - sum).abs() <= 1e-12);
            assert!(q.lde >= q.mde && q.mde >= 0.0);
        }
    }

    #[test]
    fn rigid_motions_leave_the_measures_unchanged() {
        let g = WeightedGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 1, 3.0),
                Edge::new(1, 2, 4.0),
                Edge::new(0, 2, 4.5),
            ],
        )
        .unwrap();
        // Deliberately non-exact placement.
        let x = Realization::new(3, 2, vec![0.1, 0.0, 3.0, 0.2, 2.9, 4.1]);
        let base_mde = mde(&x, &g);
        let base_lde = lde(&x, &g);
        assert!(base_mde > 0.0);

        // Rotate by a fixed angle and translate.
        let (s, c) = 0.73f64.sin_cos();
        let mut moved = Realization::zeros(3, 2);
        for i in 0..3 {
            let (px, py) = (x.coord(i, 0), x.coord(i, 1));
            moved.set_coord(i, 0, c * px - s * py + 11.0);
            moved.set_coord(i, 1, s * px + c * py - 4.0);
        }
        assert!((mde(&moved, &g) - base_mde).abs() <= 1e-12);
        assert!((lde(&moved, &g) - base_lde).abs() <= 1e-12);
    }

    #[test]
    fn edgeless_graph_scores_zero() {
        let g = WeightedGraph::new(3, 2, vec![]).unwrap();
        let x = Realization::new(3, 2, vec![1.0; 6]);
        assert_eq!(mde(&x, &g), 0.0);
        assert_eq!(lde(&x, &g), 0.0);
    }
}
