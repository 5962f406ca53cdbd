//! Decomposition into biconnected blocks joined at cut vertices.
//!
//! Every edge lies in exactly one block; two blocks share at most one
//! vertex, and a shared vertex is a cut vertex. Solving each block
//! independently and gluing at the shared vertices solves the whole
//! instance, so the decomposition doubles as a preprocessing step.

use super::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Two or more edges, no internal cut vertex.
    Biconnected,
    /// A single bridge edge.
    Bridge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Sorted edge indices of the block.
    pub edges: Vec<usize>,
    /// Sorted vertices touched by those edges.
    pub vertices: Vec<usize>,
    pub kind: BlockKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    blocks: Vec<Block>,
    cut_vertices: Vec<usize>,
    /// `attachments[i]` lists the blocks containing `cut_vertices[i]`, the
    /// adjacency of the block-cut tree.
    attachments: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Sorted vertex ids whose removal disconnects their component.
    pub fn cut_vertices(&self) -> &[usize] {
        &self.cut_vertices
    }

    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.cut_vertices.binary_search(&v).is_ok()
    }

    /// Indices into `blocks()` of the blocks containing cut vertex `v`,
    /// empty for non-cut vertices.
    pub fn blocks_at(&self, v: usize) -> &[usize] {
        match self.cut_vertices.binary_search(&v) {
            Ok(i) => &self.attachments[i],
            Err(_) => &[],
        }
    }
}

/// Splits the graph into its blocks (maximal subgraphs without a cut vertex
/// of their own) and reports the cut vertices joining them. Isolated
/// vertices belong to no block. Iterative depth-first search, so deep
/// graphs cannot overflow the call stack.
pub fn one_decomposition(g: &WeightedGraph) -> BlockDecomposition {
    let n = g.vertex_count();
    let adj = g.adjacency();

    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut clock = 0usize;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut is_cut = vec![false; n];
    let mut raw_blocks: Vec<Vec<usize>> = Vec::new();

    // Explicit DFS frame: vertex, edge we arrived by, position in adj list.
    struct Frame {
        v: usize,
        via: Option<usize>,
        next: usize,
    }

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        let mut root_children = 0usize;
        let mut stack = vec![Frame {
            v: root,
            via: None,
            next: 0,
        }];
        while let Some(frame) = stack.last_mut() {
            let v = frame.v;
            if frame.next < adj[v].len() {
                let (w, e) = adj[v][frame.next];
                frame.next += 1;
                if Some(e) == frame.via {
                    continue;
                }
                if disc[w] == UNSEEN {
                    edge_stack.push(e);
                    disc[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push(Frame {
                        v: w,
                        via: Some(e),
                        next: 0,
                    });
                } else if disc[w] < disc[v] {
                    // Back edge to an ancestor.
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                let finished = stack.pop().expect("frame exists");
                if let Some(&parent) = stack.last().map(|f| &f.v) {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        // Everything above the entering edge is one block.
                        let via = finished.via.expect("non-root has an entry edge");
                        let mut block = Vec::new();
                        while let Some(&top) = edge_stack.last() {
                            block.push(edge_stack.pop().expect("nonempty"));
                            if top == via {
                                break;
                            }
                        }
                        raw_blocks.push(block);
                        if parent != root {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
        }
        if root_children >= 2 {
            is_cut[root] = true;
        }
    }
    debug_assert!(edge_stack.is_empty());

    let mut blocks: Vec<Block> = raw_blocks
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let mut vertices: Vec<usize> = edges
                .iter()
                .flat_map(|&e| [g.edge(e).u, g.edge(e).v])
                .collect();
            vertices.sort_unstable();
            vertices.dedup();
            let kind = if edges.len() == 1 {
                BlockKind::Bridge
            } else {
                BlockKind::Biconnected
            };
            Block {
                edges,
                vertices,
                kind,
            }
        })
        .collect();
    blocks.sort_by_key(|b| b.edges[0]);

    let cut_vertices: Vec<usize> = (0..n).filter(|&v| is_cut[v]).collect();
    let attachments = cut_vertices
        .iter()
        .map(|&v| {
            blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.vertices.binary_search(&v).is_ok())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    BlockDecomposition {
        blocks,
        cut_vertices,
        attachments,
    }
}
