//! Square-lattice discretization of planar domains with holes.
//!
//! Lattice points sit at `(i·h, j·h)` for integer `i, j`, so a domain that is
//! symmetric about the origin produces a symmetric lattice. A point is an
//! active vertex when it lies in the closed outer shape and outside every open
//! hole. A lattice cell is *filled* when all four corners are active; the
//! unfilled cells split into faces, one unbounded (label 0) and one per hole
//! (labels `1..=k`).

use std::collections::{HashMap, VecDeque};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Gaps between boundary components must span at least this many cells.
pub const MIN_GAP_CELLS: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Disk { center: [f64; 2], radius: f64 },
    Rectangle { min: [f64; 2], max: [f64; 2] },
}

impl Shape {
    pub fn disk(center: [f64; 2], radius: f64) -> Self {
        Shape::Disk { center, radius }
    }

    pub fn rectangle(min: [f64; 2], max: [f64; 2]) -> Self {
        Shape::Rectangle { min, max }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Shape::Disk { center, radius } => center.iter().all(|c| c.is_finite()) && radius > 0.0,
            Shape::Rectangle { min, max } => min[0] < max[0] && min[1] < max[1],
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDomain(format!("degenerate shape {self:?}")))
        }
    }

    fn contains_closed(&self, p: [f64; 2], eps: f64) -> bool {
        match *self {
            Shape::Disk { center, radius } => dist(p, center) <= radius + eps,
            Shape::Rectangle { min, max } => {
                p[0] >= min[0] - eps && p[0] <= max[0] + eps && p[1] >= min[1] - eps && p[1] <= max[1] + eps
            }
        }
    }

    fn contains_open(&self, p: [f64; 2], eps: f64) -> bool {
        match *self {
            Shape::Disk { center, radius } => dist(p, center) < radius - eps,
            Shape::Rectangle { min, max } => {
                p[0] > min[0] + eps && p[0] < max[0] - eps && p[1] > min[1] + eps && p[1] < max[1] - eps
            }
        }
    }

    fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        match *self {
            Shape::Disk { center, radius } => (
                [center[0] - radius, center[1] - radius],
                [center[0] + radius, center[1] + radius],
            ),
            Shape::Rectangle { min, max } => (min, max),
        }
    }

    /// Reference point used for the hole's Aharonov–Bohm potential.
    pub fn reference_point(&self) -> [f64; 2] {
        match *self {
            Shape::Disk { center, .. } => center,
            Shape::Rectangle { min, max } => [0.5 * (min[0] + max[0]), 0.5 * (min[1] + max[1])],
        }
    }

    /// Signed clearance between two disjoint holes (negative when they overlap).
    fn clearance_to(&self, other: &Shape) -> f64 {
        match (self, other) {
            (Shape::Disk { center: a, radius: ra }, Shape::Disk { center: b, radius: rb }) => dist(*a, *b) - ra - rb,
            (Shape::Disk { center, radius }, Shape::Rectangle { min, max })
            | (Shape::Rectangle { min, max }, Shape::Disk { center, radius }) => {
                rect_point_distance(*min, *max, *center) - radius
            }
            (Shape::Rectangle { min: a0, max: a1 }, Shape::Rectangle { min: b0, max: b1 }) => {
                let dx = (b0[0] - a1[0]).max(a0[0] - b1[0]);
                let dy = (b0[1] - a1[1]).max(a0[1] - b1[1]);
                if dx > 0.0 && dy > 0.0 {
                    dx.hypot(dy)
                } else {
                    dx.max(dy)
                }
            }
        }
    }

    /// Clearance between `self` (outer) and an inner shape.
    fn inner_clearance(&self, inner: &Shape) -> f64 {
        match (self, inner) {
            (Shape::Disk { center, radius }, Shape::Disk { center: c, radius: r }) => radius - dist(*center, *c) - r,
            (Shape::Disk { center, radius }, Shape::Rectangle { min, max }) => {
                let far = [[min[0], min[1]], [max[0], min[1]], [max[0], max[1]], [min[0], max[1]]]
                    .into_iter()
                    .map(|corner| dist(*center, corner))
                    .fold(0.0, f64::max);
                radius - far
            }
            (Shape::Rectangle { min, max }, Shape::Disk { center: c, radius: r }) => {
                (c[0] - min[0]).min(max[0] - c[0]).min(c[1] - min[1]).min(max[1] - c[1]) - r
            }
            (Shape::Rectangle { min, max }, Shape::Rectangle { min: a, max: b }) => {
                (a[0] - min[0]).min(max[0] - b[0]).min(a[1] - min[1]).min(max[1] - b[1])
            }
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn rect_point_distance(min: [f64; 2], max: [f64; 2], p: [f64; 2]) -> f64 {
    let dx = (min[0] - p[0]).max(0.0).max(p[0] - max[0]);
    let dy = (min[1] - p[1]).max(0.0).max(p[1] - max[1]);
    dx.hypot(dy)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub outer: Shape,
    #[serde(default)]
    pub holes: Vec<Shape>,
    pub spacing: f64,
}

impl DomainSpec {
    /// Disk of radius `outer` with one concentric hole, both centered at the origin.
    pub fn annulus(outer: f64, inner: f64, spacing: f64) -> Self {
        Self {
            outer: Shape::disk([0.0, 0.0], outer),
            holes: vec![Shape::disk([0.0, 0.0], inner)],
            spacing,
        }
    }

    pub fn with_spacing(&self, spacing: f64) -> Self {
        Self { spacing, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidDomain(format!("spacing must be positive, got {}", self.spacing)));
        }
        self.outer.validate()?;
        let min_gap = MIN_GAP_CELLS * self.spacing;
        for (i, hole) in self.holes.iter().enumerate() {
            hole.validate()?;
            let clearance = self.outer.inner_clearance(hole);
            if clearance <= 0.0 {
                return Err(Error::InvalidDomain(format!("hole {} is not strictly inside the outer shape", i + 1)));
            }
            if clearance < min_gap {
                return Err(Error::SpecTooCoarse(format!(
                    "gap between hole {} and the outer boundary is {clearance:.4}, below {MIN_GAP_CELLS} cells",
                    i + 1
                )));
            }
            for (j, other) in self.holes.iter().enumerate().skip(i + 1) {
                let clearance = hole.clearance_to(other);
                if clearance <= 0.0 {
                    return Err(Error::InvalidDomain(format!("holes {} and {} overlap", i + 1, j + 1)));
                }
                if clearance < min_gap {
                    return Err(Error::SpecTooCoarse(format!(
                        "gap between holes {} and {} is {clearance:.4}, below {MIN_GAP_CELLS} cells",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A filled lattice cell. Corners and sides run anticlockwise from the
/// lower-left corner: corners `(i,j) (i+1,j) (i+1,j+1) (i,j+1)`, sides
/// bottom, right, top, left.
#[derive(Clone, Copy, Debug)]
pub struct Cell {
    pub origin: [i64; 2],
    pub corners: [usize; 4],
    pub sides: [usize; 4],
}

/// Closed directed lattice path.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeLoop {
    steps: Vec<[usize; 2]>,
    /// +1 for anticlockwise.
    pub orientation: i8,
}

impl LatticeLoop {
    pub fn new(steps: Vec<[usize; 2]>, orientation: i8) -> Result<Self> {
        let closed = !steps.is_empty()
            && steps.windows(2).all(|w| w[0][1] == w[1][0])
            && steps.last().map(|s| s[1]) == steps.first().map(|s| s[0]);
        if !closed {
            return Err(Error::InvalidDomain("loop steps do not form a closed path".into()));
        }
        Ok(Self { steps, orientation })
    }

    pub fn steps(&self) -> &[[usize; 2]] {
        &self.steps
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s[0])
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug)]
struct IndexBox {
    lo: [i64; 2],
    hi: [i64; 2],
}

impl IndexBox {
    fn width(&self) -> usize {
        (self.hi[0] - self.lo[0] + 1) as usize
    }

    fn height(&self) -> usize {
        (self.hi[1] - self.lo[1] + 1) as usize
    }

    fn len(&self) -> usize {
        self.width() * self.height()
    }

    fn slot(&self, i: i64, j: i64) -> Option<usize> {
        if i < self.lo[0] || i > self.hi[0] || j < self.lo[1] || j > self.hi[1] {
            None
        } else {
            Some((j - self.lo[1]) as usize * self.width() + (i - self.lo[0]) as usize)
        }
    }

    fn coords(&self, slot: usize) -> [i64; 2] {
        let w = self.width();
        [self.lo[0] + (slot % w) as i64, self.lo[1] + (slot / w) as i64]
    }
}

#[derive(Clone, Debug)]
pub struct GridDomain {
    spec: DomainSpec,
    vertex_box: IndexBox,
    cell_box: IndexBox,
    vertex_at: Vec<Option<usize>>,
    coords: Vec<[i64; 2]>,
    graph: Graph,
    right_edge: Vec<Option<usize>>,
    up_edge: Vec<Option<usize>>,
    boundary_labels: Vec<Option<usize>>,
    hole_refs: Vec<[f64; 2]>,
    cells: Vec<Cell>,
    cell_at: Vec<Option<usize>>,
    face_at: Vec<Option<usize>>,
}

pub fn build_grid(spec: &DomainSpec) -> Result<GridDomain> {
    spec.validate()?;
    let h = spec.spacing;
    let eps = 1e-9 * h;

    let (bmin, bmax) = spec.outer.bounding_box();
    let lo = [(bmin[0] / h).floor() as i64 - 1, (bmin[1] / h).floor() as i64 - 1];
    let hi = [(bmax[0] / h).ceil() as i64 + 1, (bmax[1] / h).ceil() as i64 + 1];
    let vertex_box = IndexBox { lo, hi };
    let cell_box = IndexBox { lo, hi: [hi[0] - 1, hi[1] - 1] };

    let active = |i: i64, j: i64| {
        let p = [i as f64 * h, j as f64 * h];
        spec.outer.contains_closed(p, eps) && !spec.holes.iter().any(|hole| hole.contains_open(p, eps))
    };

    // Row-major numbering: vertex 0 is the lexicographically smallest (j, i).
    let mut vertex_at = vec![None; vertex_box.len()];
    let mut coords = Vec::new();
    for slot in 0..vertex_box.len() {
        let [i, j] = vertex_box.coords(slot);
        if active(i, j) {
            vertex_at[slot] = Some(coords.len());
            coords.push([i, j]);
        }
    }
    let n = coords.len();
    if n == 0 {
        return Err(Error::SpecTooCoarse("no lattice point inside the domain".into()));
    }

    let lookup = |i: i64, j: i64| vertex_box.slot(i, j).and_then(|s| vertex_at[s]);
    let mut edges = Vec::new();
    let mut right_edge = vec![None; n];
    let mut up_edge = vec![None; n];
    for (v, &[i, j]) in coords.iter().enumerate() {
        if let Some(w) = lookup(i + 1, j) {
            right_edge[v] = Some(edges.len());
            edges.push([v, w]);
        }
        if let Some(w) = lookup(i, j + 1) {
            up_edge[v] = Some(edges.len());
            edges.push([v, w]);
        }
    }
    let graph = Graph::new(n, edges);
    let (_, components) = graph.components();
    if components != 1 {
        return Err(Error::DisconnectedDomain { components });
    }

    let mut cells = Vec::new();
    let mut cell_at = vec![None; cell_box.len()];
    for slot in 0..cell_box.len() {
        let [i, j] = cell_box.coords(slot);
        let corners = [lookup(i, j), lookup(i + 1, j), lookup(i + 1, j + 1), lookup(i, j + 1)];
        if let [Some(a), Some(b), Some(c), Some(d)] = corners {
            let sides = [
                right_edge[a].expect("bottom side"),
                up_edge[b].expect("right side"),
                right_edge[d].expect("top side"),
                up_edge[a].expect("left side"),
            ];
            cell_at[slot] = Some(cells.len());
            cells.push(Cell { origin: [i, j], corners: [a, b, c, d], sides });
        }
    }

    // Faces: flood fill over unfilled cells, crossing a shared side only when
    // that side is not an active lattice edge.
    let k = spec.holes.len();
    let mut face_at: Vec<Option<usize>> = vec![None; cell_box.len()];
    let side_is_edge = |a: [i64; 2], b: [i64; 2]| -> bool {
        // side shared by horizontally or vertically adjacent cells a, b
        let (p, q) = if a[1] == b[1] {
            let x = a[0].max(b[0]);
            ([x, a[1]], [x, a[1] + 1])
        } else {
            let y = a[1].max(b[1]);
            ([a[0], y], [a[0] + 1, y])
        };
        lookup(p[0], p[1]).is_some() && lookup(q[0], q[1]).is_some()
    };
    let flood = |seed: [i64; 2], label: usize, face_at: &mut Vec<Option<usize>>| -> Result<()> {
        let slot = cell_box
            .slot(seed[0], seed[1])
            .ok_or_else(|| Error::InvalidDomain("face seed outside lattice".into()))?;
        if cell_at[slot].is_some() {
            return Err(Error::SpecTooCoarse(format!("hole {label} contains no excluded lattice cell")));
        }
        if let Some(existing) = face_at[slot] {
            return Err(Error::SpecTooCoarse(format!(
                "hole {label} is not separated from boundary component {existing}"
            )));
        }
        face_at[slot] = Some(label);
        let mut queue = VecDeque::from([seed]);
        while let Some(c) = queue.pop_front() {
            for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                let nb = [c[0] + d[0], c[1] + d[1]];
                let Some(s) = cell_box.slot(nb[0], nb[1]) else { continue };
                if cell_at[s].is_some() || side_is_edge(c, nb) {
                    continue;
                }
                match face_at[s] {
                    None => {
                        face_at[s] = Some(label);
                        queue.push_back(nb);
                    }
                    Some(other) if other != label => {
                        return Err(Error::SpecTooCoarse(format!(
                            "boundary components {other} and {label} touch on the lattice"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    };
    flood(cell_box.lo, 0, &mut face_at)?;
    let hole_refs: Vec<[f64; 2]> = spec.holes.iter().map(Shape::reference_point).collect();
    for (idx, r) in hole_refs.iter().enumerate() {
        let seed = [(r[0] / h).floor() as i64, (r[1] / h).floor() as i64];
        flood(seed, idx + 1, &mut face_at)?;
    }
    if (0..cell_box.len()).any(|s| cell_at[s].is_none() && face_at[s].is_none()) {
        return Err(Error::SpecTooCoarse(
            "lattice has a spurious hole not matching any specified hole".into(),
        ));
    }

    let mut boundary_labels = vec![None; n];
    for (v, &[i, j]) in coords.iter().enumerate() {
        for c in [[i - 1, j - 1], [i, j - 1], [i - 1, j], [i, j]] {
            let Some(s) = cell_box.slot(c[0], c[1]) else { continue };
            if let Some(label) = face_at[s] {
                match boundary_labels[v] {
                    None => boundary_labels[v] = Some(label),
                    Some(l) if l != label => {
                        return Err(Error::SpecTooCoarse(format!(
                            "vertex {v} touches boundary components {l} and {label}"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    for label in 0..=k {
        if !boundary_labels.contains(&Some(label)) {
            return Err(Error::SpecTooCoarse(format!("boundary component {label} has no lattice vertex")));
        }
    }

    Ok(GridDomain {
        spec: spec.clone(),
        vertex_box,
        cell_box,
        vertex_at,
        coords,
        graph,
        right_edge,
        up_edge,
        boundary_labels,
        hole_refs,
        cells,
        cell_at,
        face_at,
    })
}

impl GridDomain {
    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn spacing(&self) -> f64 {
        self.spec.spacing
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn hole_count(&self) -> usize {
        self.hole_refs.len()
    }

    pub fn hole_refs(&self) -> &[[f64; 2]] {
        &self.hole_refs
    }

    pub fn lattice_coords(&self, v: usize) -> [i64; 2] {
        self.coords[v]
    }

    pub fn position(&self, v: usize) -> [f64; 2] {
        let [i, j] = self.coords[v];
        [i as f64 * self.spacing(), j as f64 * self.spacing()]
    }

    pub fn vertex_at(&self, i: i64, j: i64) -> Option<usize> {
        self.vertex_box.slot(i, j).and_then(|s| self.vertex_at[s])
    }

    /// Vertex nearest to a point in length units, if that lattice point is active.
    pub fn vertex_near(&self, p: [f64; 2]) -> Option<usize> {
        let h = self.spacing();
        self.vertex_at((p[0] / h).round() as i64, (p[1] / h).round() as i64)
    }

    pub fn right_edge(&self, v: usize) -> Option<usize> {
        self.right_edge[v]
    }

    pub fn up_edge(&self, v: usize) -> Option<usize> {
        self.up_edge[v]
    }

    /// Boundary component of `v` (0 = outer, i = hole i), `None` for interior vertices.
    pub fn boundary_label(&self, v: usize) -> Option<usize> {
        self.boundary_labels[v]
    }

    pub fn boundary_labels(&self) -> &[Option<usize>] {
        &self.boundary_labels
    }

    pub fn boundary_vertices(&self, label: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.boundary_labels[v] == Some(label)).collect()
    }

    pub fn boundary_component_count(&self) -> usize {
        self.boundary_labels.iter().flatten().max().map_or(0, |m| m + 1)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_at(&self, i: i64, j: i64) -> Option<usize> {
        self.cell_box.slot(i, j).and_then(|s| self.cell_at[s])
    }

    /// Boundary component owning an unfilled cell; `None` for filled or out-of-range cells.
    pub fn face_at(&self, i: i64, j: i64) -> Option<usize> {
        self.cell_box.slot(i, j).and_then(|s| self.face_at[s])
    }

    /// Cell across side `side` (0 bottom, 1 right, 2 top, 3 left) of the cell at `origin`.
    pub fn across(origin: [i64; 2], side: usize) -> [i64; 2] {
        let [i, j] = origin;
        match side {
            0 => [i, j - 1],
            1 => [i + 1, j],
            2 => [i, j + 1],
            _ => [i - 1, j],
        }
    }

    /// Anticlockwise lattice loop around hole `index` (1-based), winding once
    /// around its reference point and around no other hole.
    ///
    /// The loop is the outer boundary of the hole's face dilated by one cell
    /// in the 8-neighborhood; the minimum gap guarantees every vertex on it is
    /// active.
    pub fn hole_loop(&self, index: usize) -> Result<LatticeLoop> {
        let k = self.hole_count();
        if index == 0 || index > k {
            return Err(Error::NoSuchHole { index, holes: k });
        }
        let mut region = vec![false; self.cell_box.len()];
        for slot in 0..self.cell_box.len() {
            if self.face_at[slot] != Some(index) {
                continue;
            }
            let [i, j] = self.cell_box.coords(slot);
            for di in -1..=1 {
                for dj in -1..=1 {
                    if let Some(s) = self.cell_box.slot(i + di, j + dj) {
                        region[s] = true;
                    }
                }
            }
        }
        let in_region = |c: [i64; 2]| self.cell_box.slot(c[0], c[1]).is_some_and(|s| region[s]);

        // Directed boundary sides with the region on the left.
        let mut outgoing: HashMap<[i64; 2], Vec<[i64; 2]>> = HashMap::new();
        let mut start: Option<[i64; 2]> = None;
        for slot in 0..self.cell_box.len() {
            if !region[slot] {
                continue;
            }
            let [i, j] = self.cell_box.coords(slot);
            let corners = [[i, j], [i + 1, j], [i + 1, j + 1], [i, j + 1]];
            for side in 0..4 {
                if in_region(Self::across([i, j], side)) {
                    continue;
                }
                let from = corners[side];
                let to = corners[(side + 1) % 4];
                outgoing.entry(from).or_default().push(to);
                if start.is_none_or(|s| (from[1], from[0]) < (s[1], s[0])) {
                    start = Some(from);
                }
            }
        }
        let start = start.ok_or(Error::NoSuchHole { index, holes: k })?;

        // Hierholzer circuit through the component containing the lowest vertex.
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&top) = stack.last() {
            match outgoing.get_mut(&top).and_then(|outs| outs.pop()) {
                Some(next) => stack.push(next),
                None => circuit.push(stack.pop().expect("non-empty")),
            }
        }
        circuit.reverse();

        let mut steps = Vec::with_capacity(circuit.len().saturating_sub(1));
        for w in circuit.windows(2) {
            let a = self.vertex_at(w[0][0], w[0][1]);
            let b = self.vertex_at(w[1][0], w[1][1]);
            match (a, b) {
                (Some(a), Some(b)) => steps.push([a, b]),
                _ => {
                    return Err(Error::SpecTooCoarse(format!(
                        "loop around hole {index} leaves the active lattice"
                    )))
                }
            }
        }
        LatticeLoop::new(steps, 1)
    }

    /// Plain-text listing of vertices (id, x, y, boundary label) and edges.
    pub fn write_dump(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# spacing {}", self.spacing())?;
        writeln!(out, "# vertices {}", self.vertex_count())?;
        for v in 0..self.vertex_count() {
            let [x, y] = self.position(v);
            let label = self.boundary_labels[v].map_or("-".to_string(), |l| l.to_string());
            writeln!(out, "v {v} {x:.10} {y:.10} {label}")?;
        }
        writeln!(out, "# edges {}", self.graph.edge_count())?;
        for (e, [a, b]) in self.graph.edges().iter().enumerate() {
            writeln!(out, "e {e} {a} {b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square(h: f64) -> DomainSpec {
        DomainSpec { outer: Shape::rectangle([0.0, 0.0], [1.0, 1.0]), holes: vec![], spacing: h }
    }

    #[test]
    fn unit_square_is_eleven_by_eleven() {
        let g = build_grid(&unit_square(0.1)).unwrap();
        assert_eq!(g.vertex_count(), 121);
        assert_eq!(g.graph().edge_count(), 2 * 11 * 10);
        assert_eq!(g.boundary_component_count(), 1);
        assert_eq!(g.boundary_vertices(0).len(), 40);
        assert_eq!(g.cells().len(), 100);
    }

    #[test]
    fn annulus_has_two_components() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.02)).unwrap();
        assert_eq!(g.hole_count(), 1);
        assert_eq!(g.boundary_component_count(), 2);
        assert!(g.vertex_at(0, 0).is_none());
        // symmetric lattice under z -> -z
        for v in 0..g.vertex_count() {
            let [i, j] = g.lattice_coords(v);
            assert!(g.vertex_at(-i, -j).is_some());
        }
    }

    #[test]
    fn hole_index_out_of_range() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        assert!(matches!(g.hole_loop(2), Err(Error::NoSuchHole { index: 2, holes: 1 })));
        assert!(matches!(g.hole_loop(0), Err(Error::NoSuchHole { .. })));
    }

    #[test]
    fn narrow_gap_is_too_coarse() {
        let spec = DomainSpec::annulus(1.0, 0.95, 0.02);
        assert!(matches!(build_grid(&spec), Err(Error::SpecTooCoarse(_))));
    }

    #[test]
    fn tiny_hole_is_too_coarse() {
        let spec = DomainSpec {
            outer: Shape::disk([0.0, 0.0], 1.0),
            holes: vec![Shape::disk([0.013, 0.011], 0.004)],
            spacing: 0.05,
        };
        assert!(matches!(build_grid(&spec), Err(Error::SpecTooCoarse(_))));
    }

    #[test]
    fn overlapping_holes_rejected() {
        let spec = DomainSpec {
            outer: Shape::rectangle([0.0, 0.0], [3.0, 1.0]),
            holes: vec![Shape::disk([1.0, 0.5], 0.3), Shape::disk([1.4, 0.5], 0.3)],
            spacing: 0.02,
        };
        assert!(matches!(build_grid(&spec), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn loop_is_closed_and_active() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        let l = g.hole_loop(1).unwrap();
        for &[a, b] in l.steps() {
            assert!(g.graph().find_edge(a, b).is_some());
        }
    }
}
