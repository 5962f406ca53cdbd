//! The three optimization models, in one uniform shape: a smooth objective
//! with analytic gradient, homogeneous linear equality rows `A z = 0`, and
//! box bounds per variable.
//!
//! * [`build_edge`]: coordinates only. Objective sums squared residuals of
//!   squared distances; the only rows pin the centroid to the origin.
//! * [`build_cycle`]: one projected segment length per edge and dimension.
//!   Realizability is encoded by cycle rows: around every basis cycle the
//!   signed segment lengths cancel.
//! * [`build_euler`]: coordinates and segment lengths together. The full
//!   set of cycle rows is relaxed to a single aggregated row per dimension
//!   taken from an Euler circuit, plus coupling rows tying y to x.
//!
//! Every row touches a single dimension, so the feasible-set projector
//! factors per dimension; it is built lazily and cached.

use crate::graph::{ArcSet, CycleBasis, EulerStructure, WeightedGraph};
use nalgebra::DMatrix;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulationKind {
    Edge,
    Cycle,
    Euler,
}

impl FormulationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulationKind::Edge => "edge",
            FormulationKind::Cycle => "cycle",
            FormulationKind::Euler => "euler",
        }
    }
}

impl std::fmt::Display for FormulationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FormulationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge" => Ok(FormulationKind::Edge),
            "cycle" => Ok(FormulationKind::Cycle),
            "euler" => Ok(FormulationKind::Euler),
            other => Err(format!("unknown formulation `{other}` (edge|cycle|euler)")),
        }
    }
}

/// Where each variable lives in the flat vector. The x block (if any)
/// comes first as `x[i*K + k]`, then the y block as `y[e*K + k]`. Both
/// blocks interleave dimensions the same way, so variable `idx` always
/// belongs to dimension `idx % K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableLayout {
    x_points: usize,
    y_edges: usize,
    dim: usize,
}

impl VariableLayout {
    pub fn x_only(points: usize, dim: usize) -> Self {
        assert!(dim > 0);
        VariableLayout {
            x_points: points,
            y_edges: 0,
            dim,
        }
    }

    pub fn y_only(edges: usize, dim: usize) -> Self {
        assert!(dim > 0);
        VariableLayout {
            x_points: 0,
            y_edges: edges,
            dim,
        }
    }

    pub fn x_and_y(points: usize, edges: usize, dim: usize) -> Self {
        assert!(dim > 0);
        VariableLayout {
            x_points: points,
            y_edges: edges,
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_x(&self) -> bool {
        self.x_points > 0
    }

    pub fn has_y(&self) -> bool {
        self.y_edges > 0
    }

    pub fn x_points(&self) -> usize {
        self.x_points
    }

    pub fn y_edges(&self) -> usize {
        self.y_edges
    }

    pub fn x_len(&self) -> usize {
        self.x_points * self.dim
    }

    pub fn len(&self) -> usize {
        (self.x_points + self.y_edges) * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_index(&self, i: usize, k: usize) -> usize {
        debug_assert!(i < self.x_points && k < self.dim);
        i * self.dim + k
    }

    pub fn y_index(&self, e: usize, k: usize) -> usize {
        debug_assert!(e < self.y_edges && k < self.dim);
        self.x_len() + e * self.dim + k
    }
}

/// A flat variable vector tagged with its layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PointAssignment {
    layout: VariableLayout,
    values: Vec<f64>,
}

impl PointAssignment {
    pub fn new(layout: VariableLayout, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), layout.len(), "value count must match layout");
        PointAssignment { layout, values }
    }

    pub fn zeros(layout: VariableLayout) -> Self {
        PointAssignment {
            values: vec![0.0; layout.len()],
            layout,
        }
    }

    pub fn layout(&self) -> VariableLayout {
        self.layout
    }

    pub fn x(&self, i: usize, k: usize) -> f64 {
        self.values[self.layout.x_index(i, k)]
    }

    pub fn y(&self, e: usize, k: usize) -> f64 {
        self.values[self.layout.y_index(e, k)]
    }

    pub fn set_x(&mut self, i: usize, k: usize, v: f64) {
        let idx = self.layout.x_index(i, k);
        self.values[idx] = v;
    }

    pub fn set_y(&mut self, e: usize, k: usize, v: f64) {
        let idx = self.layout.y_index(e, k);
        self.values[idx] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// One homogeneous equality `sum coeff * z[idx] = 0`, stored sparse.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    entries: Vec<(usize, f64)>,
}

impl SparseRow {
    pub fn new(entries: Vec<(usize, f64)>) -> Self {
        SparseRow { entries }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, c)| c * z[i]).sum()
    }
}

/// Smooth objective + homogeneous rows + box bounds; see the module docs
/// for the three concrete shapes.
#[derive(Debug)]
pub struct FormulationInstance {
    kind: FormulationKind,
    layout: VariableLayout,
    /// Per edge: endpoints (tail, head) and target length. The edge model
    /// reads the endpoints; the y-based models only read the lengths; the
    /// coupling rows of the Euler model encode endpoints separately.
    edges: Vec<(usize, usize, f64)>,
    rows: Vec<SparseRow>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    projector: OnceLock<Projector>,
}

impl FormulationInstance {
    /// Assembles a model from raw parts. The builders below cover the
    /// three standard shapes; this is the escape hatch for custom models
    /// and targeted tests.
    pub fn from_parts(
        kind: FormulationKind,
        layout: VariableLayout,
        edges: Vec<(usize, usize, f64)>,
        rows: Vec<SparseRow>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Self {
        assert_eq!(lower.len(), layout.len());
        assert_eq!(upper.len(), layout.len());
        for (lo, hi) in lower.iter().zip(&upper) {
            assert!(lo <= hi, "empty box bound");
        }
        for row in &rows {
            for &(idx, coeff) in row.entries() {
                assert!(idx < layout.len(), "row index out of range");
                assert!(coeff.is_finite());
            }
        }
        if matches!(kind, FormulationKind::Cycle | FormulationKind::Euler) {
            assert_eq!(edges.len(), layout.y_edges(), "one length per y edge");
        }
        FormulationInstance {
            kind,
            layout,
            edges,
            rows,
            lower,
            upper,
            projector: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> FormulationKind {
        self.kind
    }

    pub fn layout(&self) -> VariableLayout {
        self.layout
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Per-edge `(tail, head, d)` as used by the objective.
    pub fn edge_terms(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Sum over edges of the squared residual of squared lengths. For the
    /// edge model the length comes from coordinates, otherwise from the
    /// edge's y variables; either way the result is nonnegative and zero
    /// exactly when every residual vanishes.
    pub fn objective(&self, p: &PointAssignment) -> f64 {
        debug_assert_eq!(p.layout(), self.layout);
        self.objective_slice(p.values())
    }

    pub(crate) fn objective_slice(&self, z: &[f64]) -> f64 {
        debug_assert_eq!(z.len(), self.layout.len());
        let k_count = self.layout.dim();
        let mut total = 0.0;
        match self.kind {
            FormulationKind::Edge => {
                for &(u, v, d) in &self.edges {
                    let mut sq = 0.0;
                    for k in 0..k_count {
                        let diff = z[self.layout.x_index(u, k)] - z[self.layout.x_index(v, k)];
                        sq += diff * diff;
                    }
                    let r = sq - d * d;
                    total += r * r;
                }
            }
            FormulationKind::Cycle | FormulationKind::Euler => {
                for (e, &(_, _, d)) in self.edges.iter().enumerate() {
                    let mut sq = 0.0;
                    for k in 0..k_count {
                        let y = z[self.layout.y_index(e, k)];
                        sq += y * y;
                    }
                    let r = sq - d * d;
                    total += r * r;
                }
            }
        }
        total
    }

    /// Analytic gradient of [`Self::objective`], written into `out`.
    pub fn gradient_into(&self, p: &PointAssignment, out: &mut [f64]) {
        debug_assert_eq!(p.layout(), self.layout);
        self.gradient_slice_into(p.values(), out);
    }

    pub(crate) fn gradient_slice_into(&self, z: &[f64], out: &mut [f64]) {
        debug_assert_eq!(z.len(), self.layout.len());
        assert_eq!(out.len(), self.layout.len());
        out.fill(0.0);
        let k_count = self.layout.dim();
        match self.kind {
            FormulationKind::Edge => {
                for &(u, v, d) in &self.edges {
                    let mut sq = 0.0;
                    for k in 0..k_count {
                        let diff = z[self.layout.x_index(u, k)] - z[self.layout.x_index(v, k)];
                        sq += diff * diff;
                    }
                    let r = sq - d * d;
                    for k in 0..k_count {
                        let iu = self.layout.x_index(u, k);
                        let iv = self.layout.x_index(v, k);
                        let t = 4.0 * r * (z[iu] - z[iv]);
                        out[iu] += t;
                        out[iv] -= t;
                    }
                }
            }
            FormulationKind::Cycle | FormulationKind::Euler => {
                for (e, &(_, _, d)) in self.edges.iter().enumerate() {
                    let mut sq = 0.0;
                    for k in 0..k_count {
                        let y = z[self.layout.y_index(e, k)];
                        sq += y * y;
                    }
                    let r = sq - d * d;
                    for k in 0..k_count {
                        let idx = self.layout.y_index(e, k);
                        out[idx] = 4.0 * r * z[idx];
                    }
                }
            }
        }
    }

    pub fn gradient(&self, p: &PointAssignment) -> Vec<f64> {
        let mut out = vec![0.0; self.layout.len()];
        self.gradient_into(p, &mut out);
        out
    }

    /// Largest absolute row value `max_r |A_r z|`, 0 when there are no rows.
    pub fn max_row_residual(&self, values: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| r.eval(values).abs())
            .fold(0.0, f64::max)
    }

    /// Clamps every variable into its box, in place.
    pub fn clip_in_place(&self, values: &mut [f64]) {
        for (v, (lo, hi)) in values.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    pub(crate) fn projector(&self) -> &Projector {
        self.projector
            .get_or_init(|| Projector::build(self.layout, &self.rows))
    }

    /// Orthogonal projection onto `{z : A z = 0}`, in place.
    pub(crate) fn project_rows_in_place(&self, values: &mut [f64]) {
        self.projector().project_in_place(values);
    }
}

/// Direct every edge's objective bookkeeping from the arc orientation so y
/// variables mean `x[tail] - x[head]` throughout.
fn oriented_edges(g: &WeightedGraph, arcs: &ArcSet) -> Vec<(usize, usize, f64)> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| (arcs.tail(e), arcs.head(e), edge.weight))
        .collect()
}

/// Coordinate bound: half the total edge weight covers the worst case of
/// every edge stretched along one line through the origin.
fn coordinate_bound(g: &WeightedGraph) -> f64 {
    0.5 * g.total_weight()
}

/// Coordinate model: minimize squared residuals of squared distances over
/// x, with the centroid pinned to the origin (one row per dimension).
pub fn build_edge(g: &WeightedGraph) -> FormulationInstance {
    let n = g.vertex_count();
    let dim = g.dim();
    let layout = VariableLayout::x_only(n, dim);
    let bound = coordinate_bound(g);

    let rows = (0..dim)
        .map(|k| SparseRow::new((0..n).map(|i| (layout.x_index(i, k), 1.0)).collect()))
        .collect();

    FormulationInstance::from_parts(
        FormulationKind::Edge,
        layout,
        g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect(),
        rows,
        vec![-bound; layout.len()],
        vec![bound; layout.len()],
    )
}

/// Segment-length model: variables `y[e][k]` stand for the per-dimension
/// differences along each oriented edge. One row per basis cycle and
/// dimension forces the signed segments around the cycle to cancel; the
/// box is `-d_e <= y <= d_e`.
pub fn build_cycle(
    g: &WeightedGraph,
    arcs: &ArcSet,
    basis: &CycleBasis,
) -> FormulationInstance {
    let m = g.edge_count();
    let dim = g.dim();
    let layout = VariableLayout::y_only(m, dim);

    let mut rows = Vec::with_capacity(dim * basis.len());
    for k in 0..dim {
        for cycle in basis.cycles() {
            rows.push(SparseRow::new(
                cycle
                    .iter()
                    .map(|(e, c)| (layout.y_index(e, k), f64::from(c)))
                    .collect(),
            ));
        }
    }

    let mut lower = vec![0.0; layout.len()];
    let mut upper = vec![0.0; layout.len()];
    for (e, edge) in g.edges().iter().enumerate() {
        for k in 0..dim {
            lower[layout.y_index(e, k)] = -edge.weight;
            upper[layout.y_index(e, k)] = edge.weight;
        }
    }

    FormulationInstance::from_parts(
        FormulationKind::Cycle,
        layout,
        oriented_edges(g, arcs),
        rows,
        lower,
        upper,
    )
}

/// Relaxed model carrying both blocks. Per dimension the rows are: one
/// aggregated circuit row (signed net traversal count per edge), one
/// coupling row `x[tail] - x[head] - y[e] = 0` per edge, and one centroid
/// row. The aggregated row is implied by the coupling rows, so the row
/// set is rank-deficient by construction; the projector tolerates that.
pub fn build_euler(
    g: &WeightedGraph,
    arcs: &ArcSet,
    es: &EulerStructure,
) -> FormulationInstance {
    let n = g.vertex_count();
    let m = g.edge_count();
    let dim = g.dim();
    let layout = VariableLayout::x_and_y(n, m, dim);
    let bound = coordinate_bound(g);

    let mut rows = Vec::with_capacity(dim * (m + 2));
    for k in 0..dim {
        rows.push(SparseRow::new(
            es.net_coefficients()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(e, &c)| (layout.y_index(e, k), c as f64))
                .collect(),
        ));
        for e in 0..m {
            rows.push(SparseRow::new(vec![
                (layout.x_index(arcs.tail(e), k), 1.0),
                (layout.x_index(arcs.head(e), k), -1.0),
                (layout.y_index(e, k), -1.0),
            ]));
        }
        rows.push(SparseRow::new(
            (0..n).map(|i| (layout.x_index(i, k), 1.0)).collect(),
        ));
    }

    let mut lower = vec![-bound; layout.len()];
    let mut upper = vec![bound; layout.len()];
    for (e, edge) in g.edges().iter().enumerate() {
        for k in 0..dim {
            lower[layout.y_index(e, k)] = -edge.weight;
            upper[layout.y_index(e, k)] = edge.weight;
        }
    }

    FormulationInstance::from_parts(
        FormulationKind::Euler,
        layout,
        oriented_edges(g, arcs),
        rows,
        lower,
        upper,
    )
}

/// Orthogonal projector onto the null space of the constraint rows,
/// stored as an orthonormal basis Q of the row span: `P z = z - Q Qᵀ z`.
///
/// All builder rows touch a single dimension, and the variable order puts
/// dimension `k` at indices `k, K+k, 2K+k, ...`; in that case one thin Q
/// per dimension suffices and projection works on strided slices. Rows
/// mixing dimensions (possible via `from_parts`) fall back to a full-size
/// Q. Rank-revealing QR drops dependent rows, so redundant row sets (the
/// aggregated circuit row) project correctly.
#[derive(Debug)]
pub(crate) struct Projector {
    dim: usize,
    per_dim: Vec<Option<DMatrix<f64>>>,
    full: Option<DMatrix<f64>>,
}

impl Projector {
    fn build(layout: VariableLayout, rows: &[SparseRow]) -> Self {
        let dim = layout.dim();
        let len = layout.len();
        let positions = len / dim.max(1);

        let row_dim = |row: &SparseRow| -> Option<usize> {
            let mut entries = row.entries().iter();
            let first = entries.next()?.0 % dim;
            entries
                .all(|&(idx, _)| idx % dim == first)
                .then_some(first)
        };

        let mut per_dim_rows: Vec<Vec<&SparseRow>> = vec![Vec::new(); dim];
        let mut mixed = false;
        for row in rows {
            if row.entries().is_empty() {
                continue;
            }
            match row_dim(row) {
                Some(k) => per_dim_rows[k].push(row),
                None => {
                    mixed = true;
                    break;
                }
            }
        }

        if mixed {
            let mut a = DMatrix::zeros(len, rows.len());
            for (j, row) in rows.iter().enumerate() {
                for &(idx, coeff) in row.entries() {
                    a[(idx, j)] = coeff;
                }
            }
            return Projector {
                dim,
                per_dim: vec![None; dim],
                full: orthonormal_span(a),
            };
        }

        let per_dim = per_dim_rows
            .into_iter()
            .map(|rows_k| {
                if rows_k.is_empty() {
                    return None;
                }
                let mut a = DMatrix::zeros(positions, rows_k.len());
                for (j, row) in rows_k.iter().enumerate() {
                    for &(idx, coeff) in row.entries() {
                        a[(idx / dim, j)] = coeff;
                    }
                }
                orthonormal_span(a)
            })
            .collect();

        Projector {
            dim,
            per_dim,
            full: None,
        }
    }

    pub(crate) fn project_in_place(&self, z: &mut [f64]) {
        if let Some(q) = &self.full {
            subtract_span_component(q, z);
            return;
        }
        let dim = self.dim;
        let positions = z.len() / dim;
        let mut strided = vec![0.0; positions];
        for (k, q) in self.per_dim.iter().enumerate() {
            let Some(q) = q else { continue };
            for p in 0..positions {
                strided[p] = z[p * dim + k];
            }
            subtract_span_component(q, &mut strided);
            for p in 0..positions {
                z[p * dim + k] = strided[p];
            }
        }
    }
}

/// `z -= Q (Qᵀ z)` for an orthonormal Q.
fn subtract_span_component(q: &DMatrix<f64>, z: &mut [f64]) {
    let zv = nalgebra::DVector::from_column_slice(z);
    let coeffs = q.transpose() * &zv;
    let correction = q * coeffs;
    for (zi, ci) in z.iter_mut().zip(correction.iter()) {
        *zi -= ci;
    }
}

/// Orthonormal basis of the column span of `a` via rank-revealing QR;
/// `None` when the span is trivial.
fn orthonormal_span(a: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let (nrows, ncols) = a.shape();
    if nrows == 0 || ncols == 0 {
        return None;
    }
    let qr = a.col_piv_qr();
    let r = qr.r();
    let q = qr.q();
    let head = r[(0, 0)].abs();
    if head == 0.0 {
        return None;
    }
    let rank = (0..r.nrows().min(r.ncols()))
        .take_while(|&i| r[(i, i)].abs() > 1e-12 * head)
        .count();
    if rank == 0 {
        return None;
    }
    Some(q.columns(0, rank).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        euler_circuit, eulerize, fundamental_cycle_basis, orient, spanning_forest,
        two_path_replacement, Edge,
    };

    fn triangle_345() -> WeightedGraph {
        WeightedGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 1, 3.0),
                Edge::new(1, 2, 4.0),
                Edge::new(0, 2, 5.0),
            ],
        )
        .unwrap()
    }

    fn unit_square() -> WeightedGraph {
        WeightedGraph::new(
            4,
            2,
            vec![
                Edge::new(0, 1, 1.0),
                Edge::new(1, 2, 1.0),
                Edge::new(2, 3, 1.0),
                Edge::new(3, 0, 1.0),
            ],
        )
        .unwrap()
    }

    const SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];

    fn x_assignment(f: &FormulationInstance, coords: &[[f64; 2]]) -> PointAssignment {
        let mut p = PointAssignment::zeros(f.layout());
        for (i, row) in coords.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                p.set_x(i, k, v);
            }
        }
        p
    }

    /// y variables induced by coordinates: `y[e] = x[tail] - x[head]`.
    fn induce_y(f: &FormulationInstance, p: &mut PointAssignment, coords: &[[f64; 2]]) {
        for (e, &(tail, head, _)) in f.edge_terms().iter().enumerate() {
            for k in 0..f.layout().dim() {
                p.set_y(e, k, coords[tail][k] - coords[head][k]);
            }
        }
    }

    fn centered(coords: &[[f64; 2]]) -> Vec<[f64; 2]> {
        let n = coords.len() as f64;
        let mut c = [0.0, 0.0];
        for row in coords {
            c[0] += row[0] / n;
            c[1] += row[1] / n;
        }
        coords.iter().map(|r| [r[0] - c[0], r[1] - c[1]]).collect()
    }

    #[test]
    fn edge_model_on_exact_triangle() {
        let g = triangle_345();
        let f = build_edge(&g);
        assert_eq!(f.kind(), FormulationKind::Edge);
        assert_eq!(f.layout().len(), 6);
        assert_eq!(f.rows().len(), 2);

        let exact = centered(&[[0.0, 0.0], [3.0, 0.0], [3.0, 4.0]]);
        let p = x_assignment(&f, &exact);
        assert!(f.objective(&p) < 1e-18);
        assert!(f.max_row_residual(p.values()) < 1e-12);
        assert!(f.gradient(&p).iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn edge_model_coincident_points_cost_sum_of_fourth_powers() {
        let g = triangle_345();
        let f = build_edge(&g);
        let p = PointAssignment::zeros(f.layout());
        let expected: f64 = g.edges().iter().map(|e| e.weight.powi(4)).sum();
        assert_eq!(f.objective(&p), expected);
    }

    #[test]
    fn edge_model_single_edge_at_half_offsets() {
        let g = WeightedGraph::new(2, 2, vec![Edge::new(0, 1, 1.0)]).unwrap();
        let f = build_edge(&g);
        let p = x_assignment(&f, &[[-0.5, 0.0], [0.5, 0.0]]);
        assert_eq!(f.objective(&p), 0.0);
        assert!(f.max_row_residual(p.values()) == 0.0);
        // Coordinate box is half the total weight.
        assert!(f.lower().iter().all(|&lo| lo == -0.5));
        assert!(f.upper().iter().all(|&hi| hi == 0.5));
    }

    #[test]
    fn cycle_model_on_unit_square() {
        let g = unit_square();
        let arcs = orient(&g);
        let basis = fundamental_cycle_basis(&g, &arcs, &spanning_forest(&g));
        let f = build_cycle(&g, &arcs, &basis);
        assert_eq!(f.layout().len(), 8);
        assert_eq!(f.rows().len(), 2, "one basis cycle, two dimensions");

        let mut p = PointAssignment::zeros(f.layout());
        induce_y(&f, &mut p, &SQUARE);
        assert_eq!(f.objective(&p), 0.0);
        assert!(f.max_row_residual(p.values()) == 0.0);

        // Bounds follow the edge lengths.
        for e in 0..4 {
            for k in 0..2 {
                let idx = f.layout().y_index(e, k);
                assert_eq!(f.lower()[idx], -1.0);
                assert_eq!(f.upper()[idx], 1.0);
            }
        }
    }

    #[test]
    fn cycle_model_on_tree_has_no_rows() {
        let g = WeightedGraph::new(
            3,
            2,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 2.0)],
        )
        .unwrap();
        let arcs = orient(&g);
        let basis = fundamental_cycle_basis(&g, &arcs, &spanning_forest(&g));
        let f = build_cycle(&g, &arcs, &basis);
        assert!(f.rows().is_empty());

        let p = PointAssignment::zeros(f.layout());
        let expected: f64 = g.edges().iter().map(|e| e.weight.powi(4)).sum();
        assert_eq!(f.objective(&p), expected);
    }

    #[test]
    fn euler_model_row_count_and_exact_point() {
        let g = unit_square();
        let arcs = orient(&g);
        let h = eulerize(&g).unwrap();
        let circuit = euler_circuit(&g, &h).unwrap();
        let es = two_path_replacement(&g, &arcs, &h, &circuit);
        let f = build_euler(&g, &arcs, &es);

        let (n, m, dim) = (4, 4, 2);
        assert_eq!(f.layout().len(), (n + m) * dim);
        assert_eq!(f.rows().len(), dim * (1 + m + 1));

        let exact = centered(&SQUARE);
        let mut p = x_assignment(&f, &exact);
        induce_y(&f, &mut p, &exact);
        assert!(f.objective(&p) < 1e-18);
        assert!(f.max_row_residual(p.values()) < 1e-12);
    }

    #[test]
    fn euler_aggregated_row_keeps_its_slot_when_empty() {
        // Both edges of a path are duplicated and traversed out-and-back,
        // so every net coefficient cancels; the row stays, empty.
        let g = WeightedGraph::new(
            3,
            1,
            vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)],
        )
        .unwrap();
        let arcs = orient(&g);
        let h = eulerize(&g).unwrap();
        let circuit = euler_circuit(&g, &h).unwrap();
        let es = two_path_replacement(&g, &arcs, &h, &circuit);
        assert_eq!(es.net_coefficients(), &[0, 0]);

        let f = build_euler(&g, &arcs, &es);
        assert_eq!(f.rows().len(), 1 + 2 + 1);
        assert!(f.rows()[0].entries().is_empty());
    }

    #[test]
    fn objective_closed_forms() {
        // Single edge, d = 1, scaled y: (t^2 - 1)^2.
        let g = WeightedGraph::new(2, 2, vec![Edge::new(0, 1, 1.0)]).unwrap();
        let arcs = orient(&g);
        let basis = fundamental_cycle_basis(&g, &arcs, &spanning_forest(&g));
        let f = build_cycle(&g, &arcs, &basis);
        for t in [0.0, 0.5, 1.0, 2.0, 3.5] {
            let mut p = PointAssignment::zeros(f.layout());
            p.set_y(0, 0, t);
            let r: f64 = t * t - 1.0;
            assert!((f.objective(&p) - r * r).abs() < 1e-12);
        }

        // Gradient at y = (2, 0): 4 * 2 * (4 - 1) = 24 on the first
        // coordinate, 0 on the second.
        let mut p = PointAssignment::zeros(f.layout());
        p.set_y(0, 0, 2.0);
        let grad = f.gradient(&p);
        assert_eq!(grad[f.layout().y_index(0, 0)], 24.0);
        assert_eq!(grad[f.layout().y_index(0, 1)], 0.0);
    }

    /// An independent per-edge re-evaluation must agree with objective().
    #[test]
    fn objective_matches_naive_reimplementation() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        let g = triangle_345();
        let arcs = orient(&g);
        let basis = fundamental_cycle_basis(&g, &arcs, &spanning_forest(&g));
        let mut rng = StdRng::seed_from_u64(11);

        let fe = build_edge(&g);
        let fc = build_cycle(&g, &arcs, &basis);
        for _ in 0..50 {
            let pe = PointAssignment::new(
                fe.layout(),
                (0..fe.layout().len()).map(|_| rng.random_range(-3.0..3.0)).collect(),
            );
            let mut naive = 0.0;
            for &(u, v, d) in fe.edge_terms() {
                let dx = pe.x(u, 0) - pe.x(v, 0);
                let dy = pe.x(u, 1) - pe.x(v, 1);
                naive += (dx * dx + dy * dy - d * d).powi(2);
            }
            assert!((fe.objective(&pe) - naive).abs() <= 1e-12 * (1.0 + naive));

            let pc = PointAssignment::new(
                fc.layout(),
                (0..fc.layout().len()).map(|_| rng.random_range(-3.0..3.0)).collect(),
            );
            let mut naive = 0.0;
            for (e, &(_, _, d)) in fc.edge_terms().iter().enumerate() {
                let sq = pc.y(e, 0).powi(2) + pc.y(e, 1).powi(2);
                naive += (sq - d * d).powi(2);
            }
            assert!((fc.objective(&pc) - naive).abs() <= 1e-12 * (1.0 + naive));
        }
    }

    #[test]
    fn euler_gradient_is_zero_on_x_block() {
        let g = unit_square();
        let arcs = orient(&g);
        let h = eulerize(&g).unwrap();
        let circuit = euler_circuit(&g, &h).unwrap();
        let es = two_path_replacement(&g, &arcs, &h, &circuit);
        let f = build_euler(&g, &arcs, &es);

        let mut p = PointAssignment::zeros(f.layout());
        for i in 0..4 {
            for k in 0..2 {
                p.set_x(i, k, (i + k) as f64);
            }
        }
        for e in 0..4 {
            p.set_y(e, 0, 0.3 * (e as f64 + 1.0));
        }
        let grad = f.gradient(&p);
        for i in 0..4 {
            for k in 0..2 {
                assert_eq!(grad[f.layout().x_index(i, k)], 0.0);
            }
        }
        assert!(grad[f.layout().y_index(0, 0)] != 0.0);
    }
}
