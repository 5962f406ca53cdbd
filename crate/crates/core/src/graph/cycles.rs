//! Fundamental cycle basis over a spanning forest.
//!
//! Each edge outside the forest (a chord) closes exactly one cycle with the
//! forest path between its endpoints. The resulting vectors are linearly
//! independent because each contains its own chord and no other, and they
//! span the cycle space: any simple cycle is the integer combination whose
//! coefficients are read off its chord coordinates.

use super::{is_spanning_forest, ArcSet, CycleBasis, SignedCycle, WeightedGraph};
use std::collections::VecDeque;

/// Builds the fundamental cycle basis defined by `forest`, which must be a
/// spanning forest of `g` (for example from [`super::spanning_forest`]).
/// Yields `m - n + c` cycles, `c` the number of connected components. Every
/// cycle carries its chord with coefficient `+1`; signs of the remaining
/// entries follow the traversal of the forest path against `arcs`.
pub fn fundamental_cycle_basis(g: &WeightedGraph, arcs: &ArcSet, forest: &[usize]) -> CycleBasis {
    debug_assert!(is_spanning_forest(g, forest), "forest input must span g");

    let n = g.vertex_count();
    let mut in_forest = vec![false; g.edge_count()];
    let mut adj = vec![Vec::new(); n];
    for &e in forest {
        in_forest[e] = true;
        let edge = g.edge(e);
        adj[edge.u].push((edge.v, e));
        adj[edge.v].push((edge.u, e));
    }

    // Parent pointers within the forest, rooted at the smallest vertex of
    // each component.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((v, e));
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut cycles = Vec::new();
    let mut chords = Vec::new();
    for chord in 0..g.edge_count() {
        if in_forest[chord] {
            continue;
        }
        let (tail, head) = arcs.arcs()[chord];
        // Directed closed walk: the chord tail -> head, then the unique
        // forest path head -> tail. Coefficient +1 when a step follows the
        // edge's arc, -1 against it.
        let mut entries = vec![(chord, 1i8)];
        let mut a = head;
        let mut b = tail;
        // Steps on the `head` side climb child -> parent; steps on the
        // `tail` side descend parent -> child.
        while depth[a] > depth[b] {
            let (p, e) = parent[a].expect("non-root has a parent");
            entries.push((e, step_sign(arcs, e, a)));
            a = p;
        }
        while depth[b] > depth[a] {
            let (p, e) = parent[b].expect("non-root has a parent");
            entries.push((e, step_sign(arcs, e, p)));
            b = p;
        }
        while a != b {
            let (pa, ea) = parent[a].expect("non-root has a parent");
            entries.push((ea, step_sign(arcs, ea, a)));
            a = pa;
            let (pb, eb) = parent[b].expect("non-root has a parent");
            entries.push((eb, step_sign(arcs, eb, pb)));
            b = pb;
        }
        cycles.push(SignedCycle::from_entries(entries));
        chords.push(chord);
    }
    CycleBasis::new(cycles, forest.to_vec(), chords)
}

/// Sign of traversing edge `e` starting at vertex `from`.
fn step_sign(arcs: &ArcSet, e: usize, from: usize) -> i8 {
    if arcs.tail(e) == from {
        1
    } else {
        -1
    }
}

/// Signed incidence vector of the closed walk `walk[0] -> walk[1] -> ... ->
/// walk[0]`. Returns `None` if a step has no edge or the walk repeats an
/// edge; simple cycles always convert.
pub fn signed_cycle_from_walk(
    g: &WeightedGraph,
    arcs: &ArcSet,
    walk: &[usize],
) -> Option<SignedCycle> {
    if walk.len() < 3 {
        return None;
    }
    let mut entries = std::collections::BTreeMap::new();
    for i in 0..walk.len() {
        let from = walk[i];
        let to = walk[(i + 1) % walk.len()];
        let e = g.edge_between(from, to)?;
        let sign = step_sign(arcs, e, from);
        if entries.insert(e, sign).is_some() {
            return None;
        }
    }
    Some(SignedCycle::from_entries(entries))
}
