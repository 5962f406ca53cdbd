//! Plain-text instance format.
//!
//! ```text
//! # comment
//! n m K
//! u v d          (m lines, vertex ids 1-based)
//! realization    (optional)
//! x_1 ... x_K    (n lines, one per vertex)
//! ```
//!
//! Blank lines and lines starting with `#` are skipped everywhere. Weights
//! and coordinates are decimal or scientific notation floats.

use super::{Edge, GraphError, WeightedGraph};
use crate::recovery::Realization;
use thiserror::Error;

/// A parsed instance: the weighted graph plus the optional realization the
/// file shipped with (exact solutions for benchmark instances).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub ground_truth: Option<Realization>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: expected header `n m K` (three positive integers)")]
    Header { line: usize },
    #[error("line {line}: expected edge `u v d`")]
    Edge { line: usize },
    #[error("line {line}: vertex id {id} out of range 1..={n}")]
    EdgeVertex { line: usize, id: i64, n: usize },
    #[error("line {line}: expected {expect} coordinates")]
    Coordinates { line: usize, expect: usize },
    #[error("line {line}: unexpected trailing content")]
    Trailing { line: usize },
    #[error("unexpected end of input while reading {missing}")]
    Truncated { missing: &'static str },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

/// Lines paired with their 1-based position, comments and blanks dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.trim()))
        .filter(|(_, s)| !s.is_empty() && !s.starts_with('#'))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);

    let (header_line, header) = lines.next().ok_or(ParseError::Truncated {
        missing: "header `n m K`",
    })?;
    let mut fields = header.split_whitespace();
    let mut next_usize = || -> Option<usize> { fields.next()?.parse().ok() };
    let (n, m, dim) = match (next_usize(), next_usize(), next_usize(), fields.next()) {
        (Some(n), Some(m), Some(k), None) => (n, m, k),
        _ => return Err(ParseError::Header { line: header_line }),
    };

    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = lines.next().ok_or(ParseError::Truncated {
            missing: "edge list",
        })?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(ParseError::Edge { line });
        }
        let u: i64 = fields[0].parse().map_err(|_| ParseError::Edge { line })?;
        let v: i64 = fields[1].parse().map_err(|_| ParseError::Edge { line })?;
        let weight: f64 = fields[2].parse().map_err(|_| ParseError::Edge { line })?;
        for id in [u, v] {
            if id < 1 || id > n as i64 {
                return Err(ParseError::EdgeVertex { line, id, n });
            }
        }
        edges.push(Edge::new(u as usize - 1, v as usize - 1, weight));
        edge_lines.push(line);
    }

    let graph = WeightedGraph::new(n, dim, edges).map_err(|source| {
        let line = match &source {
            GraphError::SelfLoop { index, .. }
            | GraphError::VertexOutOfRange { index, .. }
            | GraphError::NegativeWeight { index, .. }
            | GraphError::DuplicateEdge { index, .. } => edge_lines[*index],
            _ => header_line,
        };
        ParseError::Graph { line, source }
    })?;

    let ground_truth = match lines.next() {
        None => None,
        Some((line, keyword)) => {
            if keyword != "realization" {
                return Err(ParseError::Trailing { line });
            }
            let mut coords = Vec::with_capacity(n * dim);
            for _ in 0..n {
                let (line, text) = lines.next().ok_or(ParseError::Truncated {
                    missing: "realization rows",
                })?;
                let row: Result<Vec<f64>, _> =
                    text.split_whitespace().map(str::parse).collect();
                match row {
                    Ok(row) if row.len() == dim => coords.extend(row),
                    _ => return Err(ParseError::Coordinates { line, expect: dim }),
                }
            }
            Some(Realization::new(n, dim, coords))
        }
    };

    if let Some((line, _)) = lines.next() {
        return Err(ParseError::Trailing { line });
    }

    Ok(Instance {
        graph,
        ground_truth,
    })
}

/// Renders an instance in the format [`parse_instance`] reads. Floats use
/// the shortest representation that round-trips, so write/parse is exact.
pub fn write_instance(instance: &Instance) -> String {
    use std::fmt::Write;

    let g = &instance.graph;
    let mut out = String::new();
    writeln!(out, "{} {} {}", g.vertex_count(), g.edge_count(), g.dim()).unwrap();
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.weight).unwrap();
    }
    if let Some(x) = &instance.ground_truth {
        writeln!(out, "realization").unwrap();
        for i in 0..g.vertex_count() {
            let row: Vec<String> = x.point(i).iter().map(f64::to_string).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    out
}
