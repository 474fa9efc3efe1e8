//! Sparse Hermitian matrices of the lattice magnetic Schrödinger operator.
//!
//! The matrix is the operator of the quadratic form
//!
//! ```text
//! Q(u) = Σ_edges |u_v − e^{iθ(w,v)} u_w|² / h² + Σ_v V_v |u_v|²
//! ```
//!
//! so the off-diagonal entry between neighbors is `−e^{−iθ(v,w)}/h²` and the
//! diagonal is `deg(v)/h² + V(v)`. Neumann conditions are the natural
//! conditions of this form. Dirichlet and slit conditions restrict the form to
//! functions vanishing on a vertex set: those vertices drop out of the unknowns
//! while their edges still contribute to the diagonal.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauge::LinkField;
use crate::geometry::GridDomain;
use crate::graph::Graph;
use crate::sparse::CsrMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField(pub Vec<f64>);

impl PotentialField {
    pub fn zero(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn from_fn(grid: &GridDomain, f: impl Fn([f64; 2]) -> f64) -> Self {
        Self((0..grid.vertex_count()).map(|v| f(grid.position(v))).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryTag {
    Neumann,
    Dirichlet,
    SlitDirichlet { slit: Vec<usize> },
    /// Matrix on the twofold cover, or one of its deck-parity blocks.
    Cover,
}

#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    matrix: CsrMatrix<Complex64>,
    row_vertex: Vec<usize>,
    vertex_row: Vec<Option<usize>>,
    bc: BoundaryTag,
}

impl HamiltonianMatrix {
    pub fn from_parts(matrix: CsrMatrix<Complex64>, row_vertex: Vec<usize>, vertex_count: usize, bc: BoundaryTag) -> Self {
        let mut vertex_row = vec![None; vertex_count];
        for (r, &v) in row_vertex.iter().enumerate() {
            vertex_row[v] = Some(r);
        }
        Self { matrix, row_vertex, vertex_row, bc }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CsrMatrix<Complex64> {
        &self.matrix
    }

    pub fn bc(&self) -> &BoundaryTag {
        &self.bc
    }

    pub fn row_vertex(&self, r: usize) -> usize {
        self.row_vertex[r]
    }

    pub fn vertex_row(&self, v: usize) -> Option<usize> {
        self.vertex_row.get(v).copied().flatten()
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.matrix.get(r, c)
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.apply(x)
    }

    pub fn norm_estimate(&self) -> f64 {
        self.matrix.max_row_sum()
    }

    /// Real copy when every entry has zero imaginary part.
    pub fn to_real(&self) -> Option<CsrMatrix<f64>> {
        self.matrix
            .values()
            .iter()
            .all(|z| z.im == 0.0)
            .then(|| self.matrix.map(|z: Complex64| z.re))
    }

    /// `max |H − H*|` over stored entries.
    pub fn hermiticity_error(&self) -> f64 {
        self.matrix
            .triplets()
            .map(|(r, c, v)| (v - self.matrix.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.values().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Rayleigh quotient `⟨x, Hx⟩ / ⟨x, x⟩`.
    pub fn rayleigh_quotient(&self, x: &[Complex64]) -> f64 {
        let hx = self.apply(x);
        let num: Complex64 = x.iter().zip(&hx).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = x.iter().map(|a| a.norm_sqr()).sum();
        num.re / den
    }

    /// Coordinate listing `row col re im`, one entry per line.
    pub fn write_coo(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "% {} {} {}", self.dim(), self.dim(), self.matrix.nnz())?;
        for (r, c, v) in self.matrix.triplets() {
            writeln!(out, "{r} {c} {:.17e} {:.17e}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Assembly on an arbitrary lattice graph with uniform spacing. Vertices with
/// `clamped[v] == true` are held at zero.
pub fn assemble_on_graph(
    graph: &Graph,
    spacing: f64,
    field: &LinkField,
    potential: &PotentialField,
    clamped: &[bool],
    bc: BoundaryTag,
) -> Result<HamiltonianMatrix> {
    let n = graph.vertex_count();
    if field.edge_count() != graph.edge_count() {
        return Err(Error::InconsistentSizes(format!(
            "link field has {} phases for {} edges",
            field.edge_count(),
            graph.edge_count()
        )));
    }
    if potential.0.len() != n || clamped.len() != n {
        return Err(Error::InconsistentSizes(format!(
            "potential has {} values and clamp mask {} entries for {n} vertices",
            potential.0.len(),
            clamped.len()
        )));
    }
    if potential.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InconsistentSizes("potential has non-finite values".into()));
    }
    let inv_h2 = 1.0 / (spacing * spacing);
    let row_vertex: Vec<usize> = (0..n).filter(|&v| !clamped[v]).collect();
    let mut vertex_row = vec![usize::MAX; n];
    for (r, &v) in row_vertex.iter().enumerate() {
        vertex_row[v] = r;
    }
    let mut triplets = Vec::with_capacity(row_vertex.len() * 5);
    for (r, &v) in row_vertex.iter().enumerate() {
        let diag = graph.degree(v) as f64 * inv_h2 + potential.0[v];
        triplets.push((r, r, Complex64::new(diag, 0.0)));
        for inc in graph.incidences(v) {
            if clamped[inc.neighbor] {
                continue;
            }
            let theta = field.oriented(inc.edge, inc.forward);
            let value = -Complex64::from_polar(inv_h2, -theta);
            triplets.push((r, vertex_row[inc.neighbor], value));
        }
    }
    let matrix = CsrMatrix::from_triplets(row_vertex.len(), triplets);
    Ok(HamiltonianMatrix::from_parts(matrix, row_vertex, n, bc))
}

pub fn assemble_magnetic(
    grid: &GridDomain,
    field: &LinkField,
    potential: &PotentialField,
    bc: BoundaryCondition,
) -> Result<HamiltonianMatrix> {
    let (clamped, tag) = match bc {
        BoundaryCondition::Neumann => (vec![false; grid.vertex_count()], BoundaryTag::Neumann),
        BoundaryCondition::Dirichlet => (
            grid.boundary_labels().iter().map(Option::is_some).collect(),
            BoundaryTag::Dirichlet,
        ),
    };
    assemble_on_graph(grid.graph(), grid.spacing(), field, potential, &clamped, tag)
}

/// Lattice path joining two different boundary components, along which the
/// slit operator vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct SlitPath {
    vertices: Vec<usize>,
    endpoint_labels: [usize; 2],
}

impl SlitPath {
    pub fn new(grid: &GridDomain, vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::BadSlit("slit needs at least two vertices".into()));
        }
        for w in vertices.windows(2) {
            if grid.graph().find_edge(w[0], w[1]).is_none() {
                return Err(Error::BadSlit(format!("vertices {} and {} are not adjacent", w[0], w[1])));
            }
        }
        let first = vertices[0];
        let last = *vertices.last().expect("len >= 2");
        let (Some(a), Some(b)) = (grid.boundary_label(first), grid.boundary_label(last)) else {
            return Err(Error::BadSlit("slit endpoints must lie on the boundary".into()));
        };
        if a == b {
            return Err(Error::BadSlit(format!("both endpoints lie on boundary component {a}")));
        }
        if let Some(&v) = vertices[1..vertices.len() - 1].iter().find(|&&v| grid.boundary_label(v).is_some()) {
            return Err(Error::BadSlit(format!("interior slit vertex {v} lies on the boundary")));
        }
        Ok(Self { vertices, endpoint_labels: [a, b] })
    }

    /// Straight ray from `center` at angle `angle`, rasterized as a
    /// 4-connected lattice path from the first to the last active vertex of the
    /// first active run.
    pub fn radial(grid: &GridDomain, center: [f64; 2], angle: f64) -> Result<Self> {
        let h = grid.spacing();
        let (dir_x, dir_y) = (angle.cos(), angle.sin());
        let reach = {
            let spec = grid.spec();
            let far = match spec.outer {
                crate::geometry::Shape::Disk { center: c, radius } => (c[0] - center[0]).hypot(c[1] - center[1]) + radius,
                crate::geometry::Shape::Rectangle { min, max } => (max[0] - min[0]).hypot(max[1] - min[1]),
            };
            far + 2.0 * h
        };
        let distance_to_ray = |p: [i64; 2]| {
            let (x, y) = (p[0] as f64 * h - center[0], p[1] as f64 * h - center[1]);
            (x * dir_y - y * dir_x).abs()
        };
        let mut lattice: Vec<[i64; 2]> = Vec::new();
        let steps = (reach / (0.125 * h)).ceil() as usize;
        for s in 0..=steps {
            let r = s as f64 * 0.125 * h;
            let p = [
                ((center[0] + r * dir_x) / h).round() as i64,
                ((center[1] + r * dir_y) / h).round() as i64,
            ];
            let Some(&prev) = lattice.last() else {
                lattice.push(p);
                continue;
            };
            if prev == p {
                continue;
            }
            if prev[0] != p[0] && prev[1] != p[1] {
                let a = [p[0], prev[1]];
                let b = [prev[0], p[1]];
                lattice.push(if distance_to_ray(a) <= distance_to_ray(b) { a } else { b });
            }
            lattice.push(p);
        }
        let active: Vec<Option<usize>> = lattice.iter().map(|p| grid.vertex_at(p[0], p[1])).collect();
        let begin = active
            .iter()
            .position(Option::is_some)
            .ok_or_else(|| Error::BadSlit(format!("ray at angle {angle} misses the domain")))?;
        let mut path: Vec<usize> = active[begin..].iter().map_while(|v| *v).collect();
        // keep exactly one boundary vertex at each end
        while path.len() > 2 && grid.boundary_label(path[1]).is_some() && grid.boundary_label(path[1]) == grid.boundary_label(path[0]) {
            path.remove(0);
        }
        while path.len() > 2 {
            let l = path.len();
            if grid.boundary_label(path[l - 2]).is_some() && grid.boundary_label(path[l - 2]) == grid.boundary_label(path[l - 1]) {
                path.pop();
            } else {
                break;
            }
        }
        Self::new(grid, path)
    }

    /// Shortest lattice path from boundary vertex `start` to boundary
    /// component `target`. The search may run along the start component;
    /// that prefix is trimmed so only the last vertex on it is kept.
    pub fn shortest(grid: &GridDomain, start: usize, target: usize) -> Result<Self> {
        let source = match grid.boundary_label(start) {
            None => return Err(Error::BadSlit(format!("start vertex {start} is not on the boundary"))),
            Some(l) if l == target => {
                return Err(Error::BadSlit(format!("start vertex {start} already lies on component {target}")))
            }
            Some(l) => l,
        };
        let n = grid.vertex_count();
        let mut parent = vec![usize::MAX; n];
        parent[start] = start;
        let mut queue = VecDeque::from([start]);
        let mut hit = None;
        'search: while let Some(v) = queue.pop_front() {
            for inc in grid.graph().incidences(v) {
                let w = inc.neighbor;
                if parent[w] != usize::MAX {
                    continue;
                }
                match grid.boundary_label(w) {
                    Some(l) if l == target => {
                        parent[w] = v;
                        hit = Some(w);
                        break 'search;
                    }
                    Some(l) if l != source => {}
                    _ => {
                        parent[w] = v;
                        queue.push_back(w);
                    }
                }
            }
        }
        let end = hit.ok_or_else(|| Error::BadSlit(format!("boundary component {target} unreachable from {start}")))?;
        let mut path = vec![end];
        while *path.last().expect("non-empty") != start {
            let v = *path.last().expect("non-empty");
            path.push(parent[v]);
        }
        path.reverse();
        let keep = path.iter().rposition(|&v| grid.boundary_label(v) == Some(source)).unwrap_or(0);
        Self::new(grid, path.split_off(keep))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn endpoint_labels(&self) -> [usize; 2] {
        self.endpoint_labels
    }
}

pub fn assemble_slit(
    grid: &GridDomain,
    field: &LinkField,
    potential: &PotentialField,
    slit: &SlitPath,
) -> Result<HamiltonianMatrix> {
    let mut clamped = vec![false; grid.vertex_count()];
    for &v in slit.vertices() {
        if v >= clamped.len() {
            return Err(Error::BadSlit(format!("slit vertex {v} outside the grid")));
        }
        clamped[v] = true;
    }
    assemble_on_graph(
        grid.graph(),
        grid.spacing(),
        field,
        potential,
        &clamped,
        BoundaryTag::SlitDirichlet { slit: slit.vertices().to_vec() },
    )
}

/// Spacing of the `n`-point discretization of the unit circle.
pub fn circle_spacing(n: usize) -> f64 {
    TAU / n as f64
}

/// Constant vector potential `α` on the circle: phase `α·2π/n` per edge.
pub fn circle_field(n: usize, alpha: f64) -> LinkField {
    LinkField::from_phases(vec![alpha * circle_spacing(n); n])
}

/// Lattice version of `−(∂_φ − iα)²` on the unit circle.
pub fn assemble_circle(n: usize, alpha: f64) -> Result<HamiltonianMatrix> {
    assemble_circle_with_potential(n, alpha, &vec![0.0; n])
}

/// Circle operator plus a potential sampled at angles `2πj/n`.
pub fn assemble_circle_with_potential(n: usize, alpha: f64, potential: &[f64]) -> Result<HamiltonianMatrix> {
    if n < 8 {
        return Err(Error::TooFewPoints(n));
    }
    let graph = Graph::cycle(n);
    assemble_on_graph(
        &graph,
        circle_spacing(n),
        &circle_field(n, alpha),
        &PotentialField(potential.to_vec()),
        &vec![false; n],
        BoundaryTag::Neumann,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{aharonov_potential, FluxVector};
    use crate::geometry::{build_grid, DomainSpec, Shape};

    fn annulus() -> GridDomain {
        build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap()
    }

    #[test]
    fn neumann_matrix_is_hermitian_with_peierls_entries() {
        let g = annulus();
        let f = aharonov_potential(&g, &FluxVector(vec![0.37])).unwrap();
        let v = PotentialField::from_fn(&g, |p| p[0] * p[1]);
        let h = assemble_magnetic(&g, &f, &v, BoundaryCondition::Neumann).unwrap();
        assert_eq!(h.dim(), g.vertex_count());
        assert!(h.hermiticity_error() <= 1e-14 * h.max_abs_entry());
        let inv_h2 = 1.0 / (0.05 * 0.05);
        for (e, &[a, b]) in g.graph().edges().iter().enumerate() {
            let expected = -Complex64::from_polar(inv_h2, -f.phases()[e]);
            assert!((h.entry(a, b) - expected).norm() < 1e-12 * inv_h2);
        }
        for vtx in 0..g.vertex_count() {
            let d = g.graph().degree(vtx) as f64 * inv_h2 + v.0[vtx];
            assert!((h.entry(vtx, vtx).re - d).abs() < 1e-9);
        }
    }

    #[test]
    fn dirichlet_drops_boundary_rows() {
        let g = annulus();
        let f = LinkField::zero(g.graph());
        let h = assemble_magnetic(&g, &f, &PotentialField::zero(g.vertex_count()), BoundaryCondition::Dirichlet).unwrap();
        let boundary = g.boundary_labels().iter().filter(|l| l.is_some()).count();
        assert_eq!(h.dim(), g.vertex_count() - boundary);
        assert_eq!(h.bc(), &BoundaryTag::Dirichlet);
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let g = annulus();
        let f = LinkField::zero(g.graph());
        let bad = PotentialField::zero(3);
        assert!(matches!(
            assemble_magnetic(&g, &f, &bad, BoundaryCondition::Neumann),
            Err(Error::InconsistentSizes(_))
        ));
    }

    #[test]
    fn circle_needs_eight_points() {
        assert!(matches!(assemble_circle(7, 0.0), Err(Error::TooFewPoints(7))));
        let h = assemble_circle(8, 0.5).unwrap();
        assert_eq!(h.dim(), 8);
        assert!(h.hermiticity_error() == 0.0);
    }

    #[test]
    fn radial_slit_joins_inner_to_outer() {
        let g = annulus();
        for angle in [0.0, 0.3, 1.0, 2.5, 4.0] {
            let s = SlitPath::radial(&g, [0.0, 0.0], angle).unwrap();
            let mut labels = s.endpoint_labels();
            labels.sort_unstable();
            assert_eq!(labels, [0, 1]);
        }
    }

    #[test]
    fn slit_on_outer_boundary_only_is_bad() {
        let g = annulus();
        let outer = g.boundary_vertices(0);
        // two adjacent outer-boundary vertices
        let a = outer[0];
        let b = g.graph().incidences(a).iter().map(|i| i.neighbor).find(|w| outer.contains(w)).unwrap();
        assert!(matches!(SlitPath::new(&g, vec![a, b]), Err(Error::BadSlit(_))));
        let interior = (0..g.vertex_count()).find(|&v| g.boundary_label(v).is_none()).unwrap();
        let nb = g.graph().incidences(interior)[0].neighbor;
        assert!(matches!(SlitPath::new(&g, vec![interior, nb]), Err(Error::BadSlit(_))));
    }

    #[test]
    fn shortest_slit_reaches_hole() {
        let spec = DomainSpec {
            outer: Shape::disk([0.0, 0.0], 1.0),
            holes: vec![Shape::disk([0.25, 0.1], 0.3)],
            spacing: 0.05,
        };
        let g = build_grid(&spec).unwrap();
        let start = g.boundary_vertices(0)[0];
        let s = SlitPath::shortest(&g, start, 1).unwrap();
        assert_eq!(s.endpoint_labels(), [0, 1]);
    }
}
