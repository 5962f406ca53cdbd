//! Realization recovery: from per-dimension segment lengths y back to
//! coordinates x with `x[tail] - x[head] = y[e]` in least squares, one
//! independent linear system per dimension.
//!
//! The normal equations are the graph Laplacian, singular by one rank per
//! connected component (translations). A rank-one correction per component
//! restores definiteness, and because the right-hand side is orthogonal to
//! the translation directions the corrected solve lands exactly on the
//! zero-centroid solution.

use crate::graph::{ArcSet, WeightedGraph};
use nalgebra::{Cholesky, DMatrix, DVector};

/// Coordinates for every vertex: row `i` is the position of vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    n: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl Realization {
    /// Row-major coordinates: `coords[i*dim + k]` is vertex `i`, axis `k`.
    pub fn new(n: usize, dim: usize, coords: Vec<f64>) -> Self {
        assert_eq!(coords.len(), n * dim);
        Realization { n, dim, coords }
    }

    pub fn zeros(n: usize, dim: usize) -> Self {
        Realization {
            n,
            dim,
            coords: vec![0.0; n * dim],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord(&self, i: usize, k: usize) -> f64 {
        self.coords[i * self.dim + k]
    }

    pub fn set_coord(&mut self, i: usize, k: usize, v: f64) {
        self.coords[i * self.dim + k] = v;
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (0..self.dim)
            .map(|k| {
                let d = self.coord(i, k) - self.coord(j, k);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Adds `shift` to every row.
    pub fn translate(&mut self, shift: &[f64]) {
        assert_eq!(shift.len(), self.dim);
        for i in 0..self.n {
            for (k, s) in shift.iter().enumerate() {
                self.coords[i * self.dim + k] += s;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryMode {
    /// Minimize the sum of squared per-edge residuals (default).
    LeastSquares,
    /// Minimize the sum of absolute per-edge residuals, via iteratively
    /// reweighted least squares.
    L1,
}

impl std::str::FromStr for RecoveryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ls" => Ok(RecoveryMode::LeastSquares),
            "l1" => Ok(RecoveryMode::L1),
            other => Err(format!("unknown recovery mode `{other}` (ls|l1)")),
        }
    }
}

/// Recovery output. Each connected component is anchored to centroid zero
/// independently; `component_count > 1` flags that the relative placement
/// of components is arbitrary.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovered {
    pub realization: Realization,
    pub component_count: usize,
}

const IRLS_EPSILON: f64 = 1e-8;
const IRLS_ITERATIONS: usize = 50;

/// Solves `x[tail(e)] - x[head(e)] = y[e*K + k]` for all edges, one
/// independent system per dimension `k`. `y` is edge-major, `m * K` long.
/// If y is cycle-consistent the residual is zero in both modes; otherwise
/// least squares spreads the defect evenly and l1 concentrates it.
pub fn recover_realization(
    g: &WeightedGraph,
    arcs: &ArcSet,
    y: &[f64],
    mode: RecoveryMode,
) -> Recovered {
    let n = g.vertex_count();
    let dim = g.dim();
    let m = g.edge_count();
    assert_eq!(y.len(), m * dim, "edge-major y of length m*K");
    assert!(y.iter().all(|v| v.is_finite()), "y must be finite");

    let components = g.components();
    let component_count = components.iter().copied().max().map_or(0, |c| c + 1);
    let mut component_sizes = vec![0usize; component_count];
    for &c in &components {
        component_sizes[c] += 1;
    }

    let mut x = Realization::zeros(n, dim);
    match mode {
        RecoveryMode::LeastSquares => {
            let laplacian = weighted_laplacian(g, arcs, None);
            let chol = ranked_cholesky(laplacian, &components);
            for k in 0..dim {
                let b = incidence_times_y(g, arcs, y, k, None);
                let sol = chol.solve(&b);
                for i in 0..n {
                    x.set_coord(i, k, sol[i]);
                }
            }
        }
        RecoveryMode::L1 => {
            for k in 0..dim {
                let mut sol = DVector::zeros(n);
                let mut weights = vec![1.0; m];
                for _ in 0..IRLS_ITERATIONS {
                    let laplacian = weighted_laplacian(g, arcs, Some(&weights));
                    let chol = ranked_cholesky(laplacian, &components);
                    let b = incidence_times_y(g, arcs, y, k, Some(&weights));
                    sol = chol.solve(&b);
                    for (e, w) in weights.iter_mut().enumerate() {
                        let (tail, head) = (arcs.tail(e), arcs.head(e));
                        let r = sol[tail] - sol[head] - y[e * dim + k];
                        *w = 1.0 / (r * r + IRLS_EPSILON * IRLS_EPSILON).sqrt();
                    }
                }
                for i in 0..n {
                    x.set_coord(i, k, sol[i]);
                }
            }
        }
    }

    center_per_component(&mut x, &components, &component_sizes);
    Recovered {
        realization: x,
        component_count,
    }
}

/// Max and mean of `|x[tail] - x[head] - y[e*K + k]|` over all edges and
/// dimensions.
pub fn residual_check(
    g: &WeightedGraph,
    arcs: &ArcSet,
    x: &Realization,
    y: &[f64],
) -> (f64, f64) {
    let dim = g.dim();
    let m = g.edge_count();
    assert_eq!(y.len(), m * dim);
    assert_eq!(x.vertex_count(), g.vertex_count());
    if m == 0 {
        return (0.0, 0.0);
    }
    let mut max = 0.0f64;
    let mut sum = 0.0f64;
    for e in 0..m {
        let (tail, head) = (arcs.tail(e), arcs.head(e));
        for k in 0..dim {
            let r = (x.coord(tail, k) - x.coord(head, k) - y[e * dim + k]).abs();
            max = max.max(r);
            sum += r;
        }
    }
    (max, sum / (m * dim) as f64)
}

/// The y induced by coordinates: `y[e*K + k] = x[tail] - x[head]`. The
/// exact inverse direction of [`recover_realization`] for consistent data.
pub fn edge_differences(g: &WeightedGraph, arcs: &ArcSet, x: &Realization) -> Vec<f64> {
    let dim = g.dim();
    let mut y = vec![0.0; g.edge_count() * dim];
    for e in 0..g.edge_count() {
        let (tail, head) = (arcs.tail(e), arcs.head(e));
        for k in 0..dim {
            y[e * dim + k] = x.coord(tail, k) - x.coord(head, k);
        }
    }
    y
}

fn weighted_laplacian(
    g: &WeightedGraph,
    arcs: &ArcSet,
    weights: Option<&[f64]>,
) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut l = DMatrix::zeros(n, n);
    for e in 0..g.edge_count() {
        let w = weights.map_or(1.0, |ws| ws[e]);
        let (a, b) = (arcs.tail(e), arcs.head(e));
        l[(a, a)] += w;
        l[(b, b)] += w;
        l[(a, b)] -= w;
        l[(b, a)] -= w;
    }
    l
}

/// Laplacian plus one rank-one term per component, then Cholesky. The
/// correction shifts the zero eigenvalue of each component's translation
/// direction to a positive value without moving the solution, because the
/// right-hand sides built from edge data sum to zero over each component.
fn ranked_cholesky(
    mut l: DMatrix<f64>,
    components: &[usize],
) -> Cholesky<f64, nalgebra::Dyn> {
    let n = components.len();
    let alpha = (1.0 + l.trace() / n as f64) / n as f64;
    for i in 0..n {
        for j in 0..n {
            if components[i] == components[j] {
                l[(i, j)] += alpha;
            }
        }
    }
    Cholesky::new(l).expect("corrected Laplacian is positive definite")
}

fn incidence_times_y(
    g: &WeightedGraph,
    arcs: &ArcSet,
    y: &[f64],
    k: usize,
    weights: Option<&[f64]>,
) -> DVector<f64> {
    let dim = g.dim();
    let mut b = DVector::zeros(g.vertex_count());
    for e in 0..g.edge_count() {
        let w = weights.map_or(1.0, |ws| ws[e]);
        let v = w * y[e * dim + k];
        b[arcs.tail(e)] += v;
        b[arcs.head(e)] -= v;
    }
    b
}

fn center_per_component(x: &mut Realization, components: &[usize], component_sizes: &[usize]) {
    let dim = x.dim();
    let mut means = vec![0.0; component_sizes.len() * dim];
    for (i, &c) in components.iter().enumerate() {
        for k in 0..dim {
            means[c * dim + k] += x.coord(i, k) / component_sizes[c] as f64;
        }
    }
    for (i, &c) in components.iter().enumerate() {
        for k in 0..dim {
            let v = x.coord(i, k) - means[c * dim + k];
            x.set_coord(i, k, v);
        }
    }
}
