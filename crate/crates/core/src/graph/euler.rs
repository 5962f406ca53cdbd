//! Eulerization, Euler circuits, and de-parallelization.
//!
//! Pipeline: [`eulerize`] duplicates edges until every degree is even,
//! [`euler_circuit`] walks the resulting multigraph visiting each edge copy
//! exactly once, and [`two_path_replacement`] reroutes every duplicate copy
//! through a fresh vertex so the traversed digraph is simple again.

use super::{ArcSet, WeightedGraph};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EulerError {
    #[error("graph is disconnected; no Euler circuit exists")]
    Disconnected,
    #[error("vertex {vertex} has odd degree {degree} in the multigraph")]
    OddDegree { vertex: usize, degree: usize },
    #[error("multiplicity of edge {edge} must be at least 1")]
    ZeroMultiplicity { edge: usize },
}

/// One traversal step over the multigraph: copy `copy` (1-based) of the
/// original edge `edge`, walked from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultigraphArc {
    pub edge: usize,
    pub copy: usize,
    pub tail: usize,
    pub head: usize,
}

/// A vertex created by [`two_path_replacement`] to reroute copy `copy > 1`
/// of edge `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddedVertex {
    pub edge: usize,
    pub copy: usize,
    pub vertex: usize,
}

/// Everything the Eulerian formulation needs: multiplicities, the circuit,
/// the rerouted simple digraph, and per-edge traversal signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerStructure {
    original_vertices: usize,
    multiplicities: Vec<usize>,
    circuit: Vec<MultigraphArc>,
    replaced_circuit: Vec<(usize, usize)>,
    added_vertices: Vec<AddedVertex>,
    signed_coefficients: Vec<i8>,
    net_coefficients: Vec<i64>,
}

impl EulerStructure {
    /// Copies of each original edge in the eulerized multigraph, all >= 1.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// The Euler circuit over the multigraph, in traversal order.
    pub fn circuit(&self) -> &[MultigraphArc] {
        &self.circuit
    }

    /// The circuit after rerouting duplicate copies, as arcs over vertex
    /// ids; ids >= the original vertex count are added vertices.
    pub fn replaced_circuit(&self) -> &[(usize, usize)] {
        &self.replaced_circuit
    }

    pub fn added_vertices(&self) -> &[AddedVertex] {
        &self.added_vertices
    }

    /// Vertex count of the rerouted digraph, originals plus added.
    pub fn total_vertices(&self) -> usize {
        self.original_vertices + self.added_vertices.len()
    }

    /// Per original edge: +1 if the circuit walks copy 1 along the edge's
    /// arc orientation, -1 against it.
    pub fn signed_coefficients(&self) -> &[i8] {
        &self.signed_coefficients
    }

    /// Per original edge: the sum of traversal signs over all copies.
    /// Copies walked in opposite directions cancel, so entries range over
    /// `-H_e ..= H_e` with the parity of `H_e`.
    pub fn net_coefficients(&self) -> &[i64] {
        &self.net_coefficients
    }
}

/// Multigraph degree of each vertex under multiplicities `h`.
fn multigraph_degrees(g: &WeightedGraph, h: &[usize]) -> Vec<usize> {
    let mut deg = vec![0usize; g.vertex_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        deg[edge.u] += h[e];
        deg[edge.v] += h[e];
    }
    deg
}

/// Duplicates edges until every vertex degree is even, returning the copy
/// count per edge (>= 1 everywhere). Odd-degree vertices are fixed in
/// pairs: repeatedly take the smallest odd vertex and duplicate every edge
/// on a shortest path (breadth-first, unweighted) to the nearest other odd
/// vertex, smallest id on distance ties. Interior path vertices gain two
/// copies so only the endpoints change parity.
///
/// Fails on disconnected graphs: no duplication scheme makes an Euler
/// circuit span two components.
pub fn eulerize(g: &WeightedGraph) -> Result<Vec<usize>, EulerError> {
    if !g.is_connected() {
        return Err(EulerError::Disconnected);
    }
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut h = vec![1usize; g.edge_count()];
    loop {
        let deg = multigraph_degrees(g, &h);
        let Some(u) = (0..n).find(|&v| deg[v] % 2 == 1) else {
            return Ok(h);
        };

        // Breadth-first distances and parent edges from u.
        let mut dist = vec![usize::MAX; n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        let partner = (0..n)
            .filter(|&v| v != u && deg[v] % 2 == 1)
            .min_by_key(|&v| (dist[v], v))
            .expect("odd-degree vertices come in pairs");

        let mut v = partner;
        while let Some((p, e)) = parent[v] {
            h[e] += 1;
            v = p;
        }
    }
}

/// Closed walk over the multigraph `(g, h)` visiting every edge copy
/// exactly once. Hierholzer construction with a deterministic tie-break:
/// from each vertex the unused copy with the smallest `(neighbor, edge,
/// copy)` is taken first. Starts at the smallest vertex incident to an
/// edge; an edgeless graph yields an empty circuit.
pub fn euler_circuit(g: &WeightedGraph, h: &[usize]) -> Result<Vec<MultigraphArc>, EulerError> {
    assert_eq!(h.len(), g.edge_count(), "one multiplicity per edge");
    if let Some(edge) = h.iter().position(|&c| c == 0) {
        return Err(EulerError::ZeroMultiplicity { edge });
    }
    if !g.is_connected() {
        return Err(EulerError::Disconnected);
    }
    let deg = multigraph_degrees(g, h);
    if let Some(vertex) = (0..g.vertex_count()).find(|&v| deg[v] % 2 == 1) {
        return Err(EulerError::OddDegree {
            vertex,
            degree: deg[vertex],
        });
    }
    if g.edge_count() == 0 {
        return Ok(Vec::new());
    }

    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for (e, edge) in g.edges().iter().enumerate() {
        for copy in 1..=h[e] {
            adj[edge.u].push((edge.v, e, copy));
            adj[edge.v].push((edge.u, e, copy));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let start = (0..n).find(|&v| deg[v] > 0).expect("some edge exists");
    let mut used: Vec<Vec<bool>> = h.iter().map(|&c| vec![false; c]).collect();
    let mut cursor = vec![0usize; n];
    // Stack entries: vertex plus the multigraph arc that led to it.
    let mut stack: Vec<(usize, Option<MultigraphArc>)> = vec![(start, None)];
    let mut reversed = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        let mut advanced = false;
        while cursor[v] < adj[v].len() {
            let (w, e, copy) = adj[v][cursor[v]];
            if used[e][copy - 1] {
                cursor[v] += 1;
                continue;
            }
            used[e][copy - 1] = true;
            cursor[v] += 1;
            stack.push((
                w,
                Some(MultigraphArc {
                    edge: e,
                    copy,
                    tail: v,
                    head: w,
                }),
            ));
            advanced = true;
            break;
        }
        if !advanced {
            reversed.push(stack.pop().expect("stack nonempty"));
        }
    }

    let circuit: Vec<MultigraphArc> = reversed
        .iter()
        .rev()
        .filter_map(|&(_, arc)| arc)
        .collect();
    debug_assert_eq!(circuit.len(), h.iter().sum::<usize>());
    Ok(circuit)
}

/// Reroutes every duplicate copy (`copy > 1`) of the circuit through a
/// fresh vertex, turning each such step into two arcs. Copy 1 keeps the
/// original endpoints, so the resulting digraph has no parallel or
/// antiparallel arcs. Added vertices are numbered from the original vertex
/// count upward, in circuit order.
pub fn two_path_replacement(
    g: &WeightedGraph,
    arcs: &ArcSet,
    h: &[usize],
    circuit: &[MultigraphArc],
) -> EulerStructure {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut replaced_circuit = Vec::with_capacity(circuit.len());
    let mut added_vertices = Vec::new();
    let mut signed_coefficients = vec![0i8; m];
    let mut net_coefficients = vec![0i64; m];

    for arc in circuit {
        let sign = if arcs.tail(arc.edge) == arc.tail { 1 } else { -1 };
        net_coefficients[arc.edge] += i64::from(sign);
        if arc.copy == 1 {
            signed_coefficients[arc.edge] = sign;
            replaced_circuit.push((arc.tail, arc.head));
        } else {
            let vertex = n + added_vertices.len();
            added_vertices.push(AddedVertex {
                edge: arc.edge,
                copy: arc.copy,
                vertex,
            });
            replaced_circuit.push((arc.tail, vertex));
            replaced_circuit.push((vertex, arc.head));
        }
    }

    EulerStructure {
        original_vertices: n,
        multiplicities: h.to_vec(),
        circuit: circuit.to_vec(),
        replaced_circuit,
        added_vertices,
        signed_coefficients,
        net_coefficients,
    }
}
