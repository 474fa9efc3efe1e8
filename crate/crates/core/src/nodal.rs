//! Nodal sets of half-flux ground states and their slitting topology.
//!
//! The zero set is traced on the cover, where the lifted ground state is a
//! real antisymmetric function and has honest sign changes. Each filled cell
//! is lifted starting from sheet 0 at its lower-left corner; since the lift
//! is antisymmetric the other sheet gives the same contour. Crossing points
//! are keyed by base edge, so segments from neighbouring cells join up
//! exactly.

use std::collections::{BTreeMap, VecDeque};
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::cover::{cover_vertex, real_lift, CoverGraph, ThetaField};
use crate::error::{Error, Result};
use crate::geometry::GridDomain;

/// Values below this fraction of the maximum count as exact zeros.
const TIE_FRACTION: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// Base edges carrying the points, in order.
    #[serde(skip)]
    pub edges: Vec<usize>,
    /// Boundary component at each end; `None` for a closed loop.
    pub endpoint_labels: Option<[usize; 2]>,
}

impl Polyline {
    pub fn is_closed(&self) -> bool {
        self.endpoint_labels.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct NodalSet {
    pub polylines: Vec<Polyline>,
    /// Per filled cell: does the zero contour pass through it.
    pub cell_mask: Vec<bool>,
    /// Per base edge: does the lifted function change sign along it.
    pub crossed_edges: Vec<bool>,
    /// Crossed edges lying in no filled cell (spikes); not part of any polyline.
    pub stray_crossings: usize,
}

impl NodalSet {
    pub fn line_count(&self) -> usize {
        self.polylines.iter().filter(|p| !p.is_closed()).count()
    }

    pub fn closed_loop_count(&self) -> usize {
        self.polylines.iter().filter(|p| p.is_closed()).count()
    }

    pub fn crossed_cell_count(&self) -> usize {
        self.cell_mask.iter().filter(|c| **c).count()
    }

    /// Copy without polyline `index`; the cell mask keeps only cells still
    /// touched by the remaining contour.
    pub fn without_polyline(&self, index: usize, grid: &GridDomain) -> NodalSet {
        let mut polylines = self.polylines.clone();
        let removed = polylines.remove(index);
        let mut crossed_edges = self.crossed_edges.clone();
        for &e in &removed.edges {
            crossed_edges[e] = false;
        }
        let cell_mask = grid
            .cells()
            .iter()
            .map(|c| c.sides.iter().any(|&e| crossed_edges[e]))
            .collect();
        NodalSet { polylines, cell_mask, crossed_edges, stray_crossings: self.stray_crossings }
    }

    pub fn write_polylines(&self, mut out: impl Write) -> std::io::Result<()> {
        for (i, line) in self.polylines.iter().enumerate() {
            match line.endpoint_labels {
                Some([a, b]) => writeln!(out, "# polyline {i} ends {a} {b}")?,
                None => writeln!(out, "# polyline {i} closed")?,
            }
            for p in &line.points {
                writeln!(out, "{:.10} {:.10}", p[0], p[1])?;
            }
        }
        Ok(())
    }

    /// Domain outline (edges on exactly one filled cell) with the nodal polylines on top.
    pub fn write_svg(&self, grid: &GridDomain, mut out: impl Write) -> std::io::Result<()> {
        let h = grid.spacing();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in 0..grid.vertex_count() {
            let p = grid.position(v);
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let pad = 2.0 * h;
        let (w, ht) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
        let scale = 600.0 / w.max(ht);
        let map = |p: [f64; 2]| [(p[0] - lo[0] + pad) * scale, (hi[1] - p[1] + pad) * scale];
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
            w * scale,
            ht * scale
        )?;
        writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##)?;
        let cells_per_edge = cells_per_edge(grid);
        write!(out, r##"<path fill="none" stroke="#333333" stroke-width="1" d=""##)?;
        for (e, &[a, b]) in grid.graph().edges().iter().enumerate() {
            if cells_per_edge[e].len() == 1 {
                let (p, q) = (map(grid.position(a)), map(grid.position(b)));
                write!(out, "M{:.2} {:.2}L{:.2} {:.2}", p[0], p[1], q[0], q[1])?;
            }
        }
        writeln!(out, r#""/>"#)?;
        for line in &self.polylines {
            write!(out, r##"<polyline fill="none" stroke="#c0392b" stroke-width="2" points=""##)?;
            for p in &line.points {
                let q = map(*p);
                write!(out, "{:.2},{:.2} ", q[0], q[1])?;
            }
            writeln!(out, r#""/>"#)?;
        }
        writeln!(out, "</svg>")
    }
}

fn cells_per_edge(grid: &GridDomain) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![Vec::new(); grid.graph().edge_count()];
    for (c, cell) in grid.cells().iter().enumerate() {
        for (side, &e) in cell.sides.iter().enumerate() {
            out[e].push((c, side));
        }
    }
    out
}

/// Sheet of each corner when corner 0 sits on sheet 0.
fn corner_offsets(grid: &GridDomain, cover: &CoverGraph) -> Vec<[usize; 4]> {
    grid.cells()
        .iter()
        .map(|cell| {
            let s1 = cover.cross(cell.sides[0], 0);
            let s2 = cover.cross(cell.sides[1], s1);
            let s3 = cover.cross(cell.sides[2], s2);
            debug_assert_eq!(cover.cross(cell.sides[3], s3), 0, "plaquette with odd cut parity");
            [0, s1, s2, s3]
        })
        .collect()
}

/// Replaces near-zero values by a tiny value carrying the sign of the first
/// clearly signed neighbour (right, up, left, down on the base lattice).
fn break_ties(f: &[f64], grid: &GridDomain, cover: &CoverGraph) -> Vec<f64> {
    let peak = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tiny = TIE_FRACTION * peak;
    let mut out = f.to_vec();
    for v in 0..grid.vertex_count() {
        if f[cover_vertex(v, 0)].abs() > tiny {
            continue;
        }
        let [i, j] = grid.lattice_coords(v);
        let mut sign = 1.0;
        for [di, dj] in [[1, 0], [0, 1], [-1, 0], [0, -1]] {
            let Some(w) = grid.vertex_at(i + di, j + dj) else { continue };
            let Some(inc) = grid.graph().find_edge(v, w) else { continue };
            let value = f[cover_vertex(w, cover.cross(inc.edge, 0))];
            if value.abs() > tiny {
                sign = value.signum();
                break;
            }
        }
        out[cover_vertex(v, 0)] = sign * f64::MIN_POSITIVE;
        out[cover_vertex(v, 1)] = -sign * f64::MIN_POSITIVE;
    }
    out
}

/// Zero contour of a real antisymmetric cover function, projected to the base.
pub fn extract_nodal_set(f: &[f64], cover: &CoverGraph, grid: &GridDomain) -> Result<NodalSet> {
    let n = grid.vertex_count();
    if f.len() != 2 * n || cover.base().vertex_count() != n {
        return Err(Error::InconsistentSizes(format!(
            "cover function has {} values for {n} base vertices",
            f.len()
        )));
    }
    let f = break_ties(f, grid, cover);
    if f.iter().all(|x| *x > 0.0) || f.iter().all(|x| *x < 0.0) {
        return Err(Error::NoSignChange);
    }

    let graph = grid.graph();
    let mut crossing: Vec<Option<[f64; 2]>> = vec![None; graph.edge_count()];
    for (e, &[a, b]) in graph.edges().iter().enumerate() {
        let fa = f[cover_vertex(a, 0)];
        let fb = f[cover_vertex(b, cover.cross(e, 0))];
        if (fa > 0.0) != (fb > 0.0) {
            let t = fa / (fa - fb);
            let (pa, pb) = (grid.position(a), grid.position(b));
            crossing[e] = Some([pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]);
        }
    }
    let crossed_edges: Vec<bool> = crossing.iter().map(Option::is_some).collect();

    // Segments per cell, as pairs of crossed base edges.
    let offsets = corner_offsets(grid, cover);
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); graph.edge_count()];
    let mut cell_mask = vec![false; grid.cells().len()];
    for (c, cell) in grid.cells().iter().enumerate() {
        let vals: [f64; 4] = std::array::from_fn(|k| f[cover_vertex(cell.corners[k], offsets[c][k])]);
        let crossed: Vec<usize> = (0..4).filter(|&s| crossed_edges[cell.sides[s]]).collect();
        let pairs: Vec<[usize; 2]> = match crossed.len() {
            0 => continue,
            2 => vec![[crossed[0], crossed[1]]],
            4 => {
                let centre = vals.iter().sum::<f64>() / 4.0;
                if (centre > 0.0) == (vals[0] > 0.0) {
                    // corners 0 and 2 connect through the centre; isolate 1 and 3
                    vec![[0, 1], [2, 3]]
                } else {
                    vec![[3, 0], [1, 2]]
                }
            }
            _ => unreachable!("a cell has an even number of sign changes around it"),
        };
        cell_mask[c] = true;
        for [s, t] in pairs {
            let (ea, eb) = (cell.sides[s], cell.sides[t]);
            links[ea].push(eb);
            links[eb].push(ea);
        }
    }

    let per_edge = cells_per_edge(grid);
    let endpoint_label = |e: usize| -> usize {
        let (c, side) = per_edge[e][0];
        let o = grid.cells()[c].origin;
        let [i, j] = GridDomain::across(o, side);
        grid.face_at(i, j).unwrap_or(0)
    };

    let mut used = vec![false; graph.edge_count()];
    let mut polylines = Vec::new();
    let trace = |start: usize, used: &mut Vec<bool>| -> Vec<usize> {
        let mut path = vec![start];
        used[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            // Each crossed edge has at most two links; take the one we did not come from.
            let next = links[cur]
                .iter()
                .copied()
                .enumerate()
                .find(|&(_, e)| e != prev && !used[e])
                .map(|(_, e)| e);
            match next {
                Some(e) => {
                    used[e] = true;
                    path.push(e);
                    prev = cur;
                    cur = e;
                }
                None => break,
            }
        }
        path
    };
    let mut stray_crossings = 0;
    for e in 0..graph.edge_count() {
        if !crossed_edges[e] || used[e] {
            continue;
        }
        match per_edge[e].len() {
            0 => {
                used[e] = true;
                stray_crossings += 1;
            }
            1 => {
                let path = trace(e, &mut used);
                let last = *path.last().expect("non-empty");
                let labels = [endpoint_label(e), endpoint_label(last)];
                polylines.push(Polyline {
                    points: path.iter().map(|&x| crossing[x].expect("crossed")).collect(),
                    edges: path,
                    endpoint_labels: Some(labels),
                });
            }
            _ => {}
        }
    }
    for e in 0..graph.edge_count() {
        if crossed_edges[e] && !used[e] {
            let mut path = trace(e, &mut used);
            path.push(e);
            polylines.push(Polyline {
                points: path.iter().map(|&x| crossing[x].expect("crossed")).collect(),
                edges: path,
                endpoint_labels: None,
            });
        }
    }

    Ok(NodalSet { polylines, cell_mask, crossed_edges, stray_crossings })
}

/// Topological summary of a nodal set against the slitting conditions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlitReport {
    pub holes: usize,
    pub n_lines: usize,
    pub closed_loops: usize,
    /// Line endpoints per boundary component (0 is the outer boundary).
    pub endpoints_per_component: BTreeMap<usize, usize>,
    pub complement_connected: bool,
    pub parity_ok: bool,
    pub cover_domain_count: usize,
    pub bounds_ok: bool,
}

impl SlitReport {
    /// All slitting conditions: lines end on the boundary, no closed loops,
    /// connected complement, odd endpoint count at every hole, and the
    /// line-count bounds.
    pub fn passes(&self) -> bool {
        self.closed_loops == 0 && self.complement_connected && self.parity_ok && self.bounds_ok
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn topology_report(nodal: &NodalSet, grid: &GridDomain, cover: &CoverGraph) -> SlitReport {
    let k = grid.hole_count();
    let mut endpoints_per_component: BTreeMap<usize, usize> = (0..=k).map(|l| (l, 0)).collect();
    for line in &nodal.polylines {
        if let Some([a, b]) = line.endpoint_labels {
            *endpoints_per_component.entry(a).or_default() += 1;
            *endpoints_per_component.entry(b).or_default() += 1;
        }
    }
    let n_lines = nodal.line_count();
    let parity_ok = (1..=k).all(|l| endpoints_per_component[&l] % 2 == 1);
    let bounds_ok = 2 * n_lines >= k && n_lines <= k;

    let cells = grid.cells();
    let neighbours = |c: usize| {
        let o = cells[c].origin;
        (0..4).filter_map(move |side| {
            let [i, j] = GridDomain::across(o, side);
            grid.cell_at(i, j).map(|d| (side, d))
        })
    };

    // Base complement: 4-adjacent filled cells not touched by the contour.
    let mut seen = vec![false; cells.len()];
    let mut components = 0;
    for start in 0..cells.len() {
        if seen[start] || nodal.cell_mask[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for (_, d) in neighbours(c) {
                if !seen[d] && !nodal.cell_mask[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
    }
    let complement_connected = components == 1;

    // Cover complement: lifted cell (c, s) has corner k on sheet s ^ offset[c][k].
    let offsets = corner_offsets(grid, cover);
    let mut seen = vec![false; 2 * cells.len()];
    let mut cover_domain_count = 0;
    for start in 0..2 * cells.len() {
        if seen[start] || nodal.cell_mask[start / 2] {
            continue;
        }
        cover_domain_count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let (c, s) = (x / 2, x % 2);
            for (side, d) in neighbours(c) {
                if nodal.cell_mask[d] {
                    continue;
                }
                // Shared corner: corner `side` of c is also a corner of d.
                let v = cells[c].corners[side];
                let kd = cells[d].corners.iter().position(|&w| w == v).expect("shared corner");
                let t = s ^ offsets[c][side] ^ offsets[d][kd];
                let y = 2 * d + t;
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }

    SlitReport {
        holes: k,
        n_lines,
        closed_loops: nodal.closed_loop_count(),
        endpoints_per_component,
        complement_connected,
        parity_ok,
        cover_domain_count,
        bounds_ok,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub disjoint: bool,
    /// `min |u₁ + i u₂| / max |u₁ + i u₂|` over interior vertices.
    pub min_ratio: f64,
    pub nowhere_zero: bool,
}

impl PairCheck {
    pub fn passes(&self) -> bool {
        self.disjoint && self.nowhere_zero
    }
}

/// Nodal sets of two orthonormal K-fixed ground states are disjoint, and
/// `u₁ + i u₂` vanishes nowhere in the interior.
pub fn degenerate_pair_check(
    u1: &[Complex64],
    u2: &[Complex64],
    multiplicity: usize,
    grid: &GridDomain,
    cover: &CoverGraph,
    theta: &ThetaField,
) -> Result<PairCheck> {
    if multiplicity != 2 {
        return Err(Error::PreconditionViolated(format!("multiplicity is {multiplicity}, not 2")));
    }
    let dot: Complex64 = u1.iter().zip(u2).map(|(a, b)| a.conj() * b).sum();
    let n1: f64 = u1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n2: f64 = u2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if dot.norm() > 1e-8 * n1 * n2 || n1 == 0.0 || n2 == 0.0 {
        return Err(Error::PreconditionViolated("representatives are not orthogonal".into()));
    }
    let m1 = extract_nodal_set(&real_lift(u1, theta).0, cover, grid)?;
    let m2 = extract_nodal_set(&real_lift(u2, theta).0, cover, grid)?;
    let disjoint = m1.cell_mask.iter().zip(&m2.cell_mask).all(|(a, b)| !(a & b));

    let i = Complex64::new(0.0, 1.0);
    let combo: Vec<f64> = u1.iter().zip(u2).map(|(a, b)| (a + i * b).norm()).collect();
    let peak = combo.iter().copied().fold(0.0, f64::max);
    let min_interior = (0..grid.vertex_count())
        .filter(|&v| grid.boundary_label(v).is_none())
        .map(|v| combo[v])
        .fold(f64::INFINITY, f64::min);
    let min_ratio = min_interior / peak;
    Ok(PairCheck { disjoint, min_ratio, nowhere_zero: min_ratio > 1e-6 })
}

/// Zero crossings of a real antisymmetric function on the `2n`-cycle cover
/// of the circle, as angles in `[0, 2π)`.
pub fn circle_nodal_points(f: &[f64], cover: &CoverGraph) -> Result<Vec<f64>> {
    let n = cover.base().vertex_count();
    if f.len() != 2 * n {
        return Err(Error::InconsistentSizes(format!("{} values on a {n}-point circle cover", f.len())));
    }
    if f.iter().all(|x| *x >= 0.0) || f.iter().all(|x| *x <= 0.0) {
        return Err(Error::NoSignChange);
    }
    let h = std::f64::consts::TAU / n as f64;
    let mut out = Vec::new();
    for (e, &[a, b]) in cover.base().edges().iter().enumerate() {
        let fa = f[cover_vertex(a, 0)];
        let fb = f[cover_vertex(b, cover.cross(e, 0))];
        if fa == 0.0 {
            out.push(a as f64 * h);
        } else if (fa > 0.0) != (fb > 0.0) && fb != 0.0 {
            let t = fa / (fa - fb);
            out.push((a as f64 + t) * h);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_cover, build_theta};
    use crate::gauge::{aharonov_potential, FluxVector};
    use crate::geometry::{build_grid, DomainSpec};
    use crate::operator::circle_field;
    use crate::graph::Graph;

    fn annulus_setup() -> (GridDomain, CoverGraph, ThetaField) {
        let grid = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        let field = aharonov_potential(&grid, &FluxVector(vec![0.5])).unwrap();
        let cover = build_cover(grid.graph(), &field).unwrap();
        let theta = build_theta(&cover, &field).unwrap();
        (grid, cover, theta)
    }

    /// Lift of a function with a single sign change across the positive x-axis.
    fn angular_lift(grid: &GridDomain, theta: &ThetaField, phi0: f64) -> Vec<f64> {
        let u: Vec<Complex64> = (0..grid.vertex_count())
            .map(|v| {
                let [x, y] = grid.position(v);
                let phi = (y.atan2(x) - phi0).rem_euclid(std::f64::consts::TAU);
                Complex64::from_polar((phi / 2.0).sin(), phi / 2.0 + phi0 / 2.0)
            })
            .collect();
        real_lift(&u, theta).0
    }

    #[test]
    fn constant_sign_rejected() {
        let (grid, cover, _) = annulus_setup();
        let f = vec![1.0; 2 * grid.vertex_count()];
        assert!(matches!(extract_nodal_set(&f, &cover, &grid), Err(Error::NoSignChange)));
    }

    #[test]
    fn empty_contour_fails_parity() {
        let (grid, cover, _) = annulus_setup();
        let empty = NodalSet {
            polylines: Vec::new(),
            cell_mask: vec![false; grid.cells().len()],
            crossed_edges: vec![false; grid.graph().edge_count()],
            stray_crossings: 0,
        };
        let report = topology_report(&empty, &grid, &cover);
        assert!(!report.parity_ok);
        assert!(!report.passes());
        assert_eq!(report.cover_domain_count, 1);
    }

    #[test]
    fn circle_point_count() {
        let n = 32;
        let field = circle_field(n, 0.5);
        let cover = build_cover(&Graph::cycle(n), &field).unwrap();
        let theta = build_theta(&cover, &field).unwrap();
        let h = std::f64::consts::TAU / n as f64;
        let u: Vec<Complex64> =
            (0..n).map(|j| Complex64::from_polar(1.0, 0.5 * j as f64 * h) * (0.5 * j as f64 * h - 0.3).sin()).collect();
        let (f, _) = real_lift(&u, &theta);
        let pts = circle_nodal_points(&f, &cover).unwrap();
        assert_eq!(pts.len(), 1, "{pts:?}");
        assert!((pts[0] - 0.6).abs() < h, "{pts:?}");
    }

    #[test]
    fn angular_test_function_slits_annulus() {
        let (grid, cover, theta) = annulus_setup();
        let f = angular_lift(&grid, &theta, 0.4);
        let nodal = extract_nodal_set(&f, &cover, &grid).unwrap();
        let report = topology_report(&nodal, &grid, &cover);
        assert!(report.passes(), "{report:?}");
        assert_eq!(report.cover_domain_count, 2);
        assert_eq!(report.n_lines, 1);
    }
}
