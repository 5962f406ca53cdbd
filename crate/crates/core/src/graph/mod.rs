//! Instance data model and combinatorial constructions.
//!
//! Vertices are `0..n` internally; the instance file format uses 1-based ids
//! and the conversion happens in [`parse_instance`]/[`write_instance`]. Edge
//! indices follow the order of the edge list and are the canonical indices
//! used by every incidence vector in this crate.

mod blocks;
mod cycles;
mod euler;
mod io;

pub use blocks::{one_decomposition, Block, BlockDecomposition, BlockKind};
pub use cycles::{fundamental_cycle_basis, signed_cycle_from_walk};
pub use euler::{
    euler_circuit, eulerize, two_path_replacement, AddedVertex, EulerError, EulerStructure,
    MultigraphArc,
};
pub use io::{parse_instance, write_instance, Instance, ParseError};

use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

/// An undirected edge `{u, v}` with a nonnegative target length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: f64) -> Self {
        Edge { u, v, weight }
    }

    /// The endpoint other than `w`. Panics if `w` is not an endpoint.
    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            debug_assert_eq!(w, self.v);
            self.u
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex count must be positive")]
    EmptyVertexSet,
    #[error("embedding dimension must be positive")]
    ZeroDimension,
    #[error("edge {index}: self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index}: negative weight {weight}")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("edge {index}: duplicate of edge {first}")]
    DuplicateEdge { index: usize, first: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

/// A simple undirected graph with nonnegative edge weights, together with the
/// embedding dimension: one EDGP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    dim: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Validates and builds an instance. Vertices are `0..n`; the edge list
    /// order becomes the canonical edge indexing.
    pub fn new(n: usize, dim: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        if dim == 0 {
            return Err(GraphError::ZeroDimension);
        }
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (index, e) in edges.iter().enumerate() {
            if e.u == e.v {
                return Err(GraphError::SelfLoop { index, vertex: e.u });
            }
            for vertex in [e.u, e.v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { index, vertex, n });
                }
            }
            if !(e.weight >= 0.0) {
                return Err(GraphError::NegativeWeight {
                    index,
                    weight: e.weight,
                });
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if let Some(&first) = seen.get(&key) {
                return Err(GraphError::DuplicateEdge { index, first });
            }
            seen.insert(key, index);
        }
        Ok(WeightedGraph { n, dim, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Embedding dimension `K`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// Sum of all edge weights; half of it bounds any coordinate of a
    /// realization centered at the origin (a single path stretched along a
    /// line is the worst case).
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Index of the edge joining `u` and `v` in either order, if present.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.u, e.v) == (u, v) || (e.u, e.v) == (v, u))
    }

    /// Incidence lists: for each vertex the `(neighbor, edge index)` pairs,
    /// sorted by edge index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (idx, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, idx));
            adj[e.v].push((e.u, idx));
        }
        adj
    }

    /// Component id per vertex, numbered in order of their smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for root in 0..self.n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }
}

/// A fixed orientation of every edge: `arcs[e] = (tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSet {
    arcs: Vec<(usize, usize)>,
}

impl ArcSet {
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn tail(&self, edge: usize) -> usize {
        self.arcs[edge].0
    }

    pub fn head(&self, edge: usize) -> usize {
        self.arcs[edge].1
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// Directs every edge from its smaller to its larger endpoint. Deterministic,
/// so incidence vectors built on top of it are reproducible.
pub fn orient(g: &WeightedGraph) -> ArcSet {
    ArcSet {
        arcs: g
            .edges()
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect(),
    }
}

/// Sparse signed incidence vector of a directed cycle: edge index to a
/// coefficient in `{-1, +1}`, `+1` when the cycle traverses the edge along
/// its arc orientation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignedCycle {
    coeffs: BTreeMap<usize, i8>,
}

impl SignedCycle {
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, i8)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in entries {
            assert!(c == 1 || c == -1, "cycle coefficients must be +1 or -1");
            coeffs.insert(e, c);
        }
        SignedCycle { coeffs }
    }

    /// Coefficient of an edge, 0 if the edge is not on the cycle.
    pub fn coefficient(&self, edge: usize) -> i8 {
        self.coeffs.get(&edge).copied().unwrap_or(0)
    }

    /// Nonzero entries in increasing edge order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// True iff the signed vector conserves flow at every vertex: the signed
/// in-degree equals the signed out-degree.
pub fn verify_cycle(g: &WeightedGraph, arcs: &ArcSet, cycle: &SignedCycle) -> bool {
    let mut balance = vec![0i64; g.vertex_count()];
    for (edge, coeff) in cycle.iter() {
        if edge >= arcs.len() {
            return false;
        }
        let (tail, head) = arcs.arcs()[edge];
        // +1 on arc (tail, head) is one unit of flow tail -> head.
        balance[tail] -= i64::from(coeff);
        balance[head] += i64::from(coeff);
    }
    balance.iter().all(|&b| b == 0)
}

/// Edge indices of a breadth-first spanning forest, rooted at the smallest
/// vertex of each component. Neighbors are explored in edge-index order, so
/// the result is deterministic.
pub fn spanning_forest(g: &WeightedGraph) -> Vec<usize> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut visited = vec![false; n];
    let mut forest_edges = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, edge) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    forest_edges.push(edge);
                    queue.push_back(w);
                }
            }
        }
    }
    forest_edges.sort_unstable();
    forest_edges
}

/// A fundamental cycle basis: one signed cycle per chord of the spanning
/// forest that generated it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    cycles: Vec<SignedCycle>,
    forest_edges: Vec<usize>,
    chords: Vec<usize>,
}

impl CycleBasis {
    pub(crate) fn new(cycles: Vec<SignedCycle>, forest_edges: Vec<usize>, chords: Vec<usize>) -> Self {
        debug_assert_eq!(cycles.len(), chords.len());
        CycleBasis {
            cycles,
            forest_edges,
            chords,
        }
    }

    pub fn cycles(&self) -> &[SignedCycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Edge indices of the generating spanning forest, sorted.
    pub fn forest_edges(&self) -> &[usize] {
        &self.forest_edges
    }

    /// `chords()[i]` is the chord edge that defines `cycles()[i]`.
    pub fn chords(&self) -> &[usize] {
        &self.chords
    }
}

/// Checks that an edge-index set is acyclic and spans every component, used
/// by tests as an independent forest oracle.
pub fn is_spanning_forest(g: &WeightedGraph, edges: &[usize]) -> bool {
    let set: HashSet<usize> = edges.iter().copied().collect();
    if set.len() != edges.len() {
        return false;
    }
    // Union-find over the chosen edges: a repeated root means a cycle.
    let mut root: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(root: &mut Vec<usize>, mut v: usize) -> usize {
        while root[v] != v {
            root[v] = root[root[v]];
            v = root[v];
        }
        v
    }
    for &e in edges {
        let edge = g.edge(e);
        let (a, b) = (find(&mut root, edge.u), find(&mut root, edge.v));
        if a == b {
            return false;
        }
        root[a] = b;
    }
    edges.len() == g.vertex_count() - g.component_count()
}
