//! Zero-field vector potentials as lattice link phases.
//!
//! A [`LinkField`] stores `θ(e) = ∫_e A·dl` for every edge in its stored
//! orientation. Circulations are reported in flux quanta: a loop whose phases
//! sum to `2π·Φ` has circulation `Φ`.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{GridDomain, LatticeLoop};
use crate::graph::Graph;

/// Circulations `(Φ₁, …, Φ_k)` in units of the flux quantum.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxVector(pub Vec<f64>);

impl FluxVector {
    pub fn zeros(k: usize) -> Self {
        Self(vec![0.0; k])
    }

    pub fn uniform(k: usize, value: f64) -> Self {
        Self(vec![value; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for FluxVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Per-vertex gauge phase χ.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexPhase(pub Vec<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct LinkField {
    phases: Vec<f64>,
}

impl LinkField {
    pub fn zero(graph: &Graph) -> Self {
        Self { phases: vec![0.0; graph.edge_count()] }
    }

    pub fn from_phases(phases: Vec<f64>) -> Self {
        Self { phases }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn edge_count(&self) -> usize {
        self.phases.len()
    }

    /// Phase on edge `e` traversed forward (`sign = 1`) or backward (`-1`).
    #[inline]
    pub fn oriented(&self, e: usize, forward: bool) -> f64 {
        if forward {
            self.phases[e]
        } else {
            -self.phases[e]
        }
    }

    /// Phase accumulated going from `from` to `to` along their common edge.
    pub fn phase(&self, graph: &Graph, from: usize, to: usize) -> Option<f64> {
        graph.find_edge(from, to).map(|inc| self.oriented(inc.edge, inc.forward))
    }

    pub fn negated(&self) -> Self {
        Self { phases: self.phases.iter().map(|t| -t).collect() }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { phases: self.phases.iter().map(|t| factor * t).collect() }
    }

    pub fn write_dump(&self, graph: &Graph, mut out: impl Write) -> std::io::Result<()> {
        for (e, [a, b]) in graph.edges().iter().enumerate() {
            writeln!(out, "{e} {a} {b} {:.17e}", self.phases[e])?;
        }
        Ok(())
    }
}

/// Angle swept by the segment `a → b` as seen from `center`, in `(-π, π]`.
pub fn angle_increment(center: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ta = (a[1] - center[1]).atan2(a[0] - center[0]);
    let tb = (b[1] - center[1]).atan2(b[0] - center[0]);
    wrap_angle(tb - ta)
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let mut r = t % TAU;
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

fn hole_increments(grid: &GridDomain, weights: &[f64]) -> Vec<f64> {
    grid.graph()
        .edges()
        .iter()
        .map(|&[a, b]| {
            let (pa, pb) = (grid.position(a), grid.position(b));
            grid.hole_refs()
                .iter()
                .zip(weights)
                .filter(|(_, w)| **w != 0.0)
                .map(|(c, w)| w * angle_increment(*c, pa, pb))
                .sum()
        })
        .collect()
}

/// Canonical Aharonov–Bohm potential `Σ Φᵢ ∇arg(x − xᵢ)`, integrated exactly
/// along every edge, with circulation `Φᵢ` around hole `i`.
pub fn aharonov_potential(grid: &GridDomain, flux: &FluxVector) -> Result<LinkField> {
    if flux.len() != grid.hole_count() {
        return Err(Error::LengthMismatch { expected: grid.hole_count(), got: flux.len() });
    }
    Ok(LinkField { phases: hole_increments(grid, flux.as_slice()) })
}

/// Circulation of `field` around `lattice_loop`, in flux quanta.
pub fn circulation(graph: &Graph, field: &LinkField, lattice_loop: &LatticeLoop) -> Result<f64> {
    let mut total = 0.0;
    for &[tail, head] in lattice_loop.steps() {
        total += field.phase(graph, tail, head).ok_or(Error::MissingEdge { tail, head })?;
    }
    Ok(total / TAU)
}

/// `θ'(e) = θ(e) + χ(head) − χ(tail)`.
pub fn gauge_transform(graph: &Graph, field: &LinkField, chi: &VertexPhase) -> Result<LinkField> {
    if chi.0.len() != graph.vertex_count() {
        return Err(Error::LengthMismatch { expected: graph.vertex_count(), got: chi.0.len() });
    }
    let phases = graph
        .edges()
        .iter()
        .zip(field.phases())
        .map(|(&[a, b], t)| t + chi.0[b] - chi.0[a])
        .collect();
    Ok(LinkField { phases })
}

/// Adds `lᵢ` flux quanta around each hole. The result is gauge-equivalent to
/// the input through the single-valued gauge `exp(i Σ lᵢ arg(x − xᵢ))`.
pub fn integer_flux_shift(grid: &GridDomain, field: &LinkField, shift: &[i64]) -> Result<LinkField> {
    if shift.len() != grid.hole_count() {
        return Err(Error::LengthMismatch { expected: grid.hole_count(), got: shift.len() });
    }
    let weights: Vec<f64> = shift.iter().map(|&l| l as f64).collect();
    let extra = hole_increments(grid, &weights);
    Ok(LinkField { phases: field.phases.iter().zip(extra).map(|(a, b)| a + b).collect() })
}

/// Oriented phase sum around every filled cell; all zero for a curl-free field.
pub fn plaquette_sums(grid: &GridDomain, field: &LinkField) -> Vec<f64> {
    grid.cells()
        .iter()
        .map(|c| {
            let [bottom, right, top, left] = c.sides;
            field.phases[bottom] + field.phases[right] - field.phases[top] - field.phases[left]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, DomainSpec};

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn zero_flux_gives_zero_field() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        let f = aharonov_potential(&g, &FluxVector::zeros(1)).unwrap();
        assert!(f.phases().iter().all(|&t| t == 0.0));
    }

    #[test]
    fn flux_length_checked() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        assert!(matches!(
            aharonov_potential(&g, &FluxVector(vec![0.5, 0.5])),
            Err(Error::LengthMismatch { expected: 1, got: 2 })
        ));
        let f = LinkField::zero(g.graph());
        assert!(integer_flux_shift(&g, &f, &[]).is_err());
    }

    #[test]
    fn half_flux_loop_sums_to_pi() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        let f = aharonov_potential(&g, &FluxVector(vec![0.5])).unwrap();
        let l = g.hole_loop(1).unwrap();
        let total: f64 = l.steps().iter().map(|&[a, b]| f.phase(g.graph(), a, b).unwrap()).sum();
        assert!((total - PI).abs() < 1e-12);
        assert!((circulation(g.graph(), &f, &l).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn missing_edge_reported() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        let f = LinkField::zero(g.graph());
        let bogus = LatticeLoop::new(vec![[0, 5], [5, 0]], 1).unwrap();
        assert!(matches!(circulation(g.graph(), &f, &bogus), Err(Error::MissingEdge { .. })));
    }

    #[test]
    fn integer_shift_moves_circulation() {
        let g = build_grid(&DomainSpec::annulus(1.0, 0.3, 0.05)).unwrap();
        let f = aharonov_potential(&g, &FluxVector(vec![0.5])).unwrap();
        let l = g.hole_loop(1).unwrap();
        let up = integer_flux_shift(&g, &f, &[1]).unwrap();
        let down = integer_flux_shift(&g, &f, &[-1]).unwrap();
        let same = integer_flux_shift(&g, &f, &[0]).unwrap();
        assert!((circulation(g.graph(), &up, &l).unwrap() - 1.5).abs() < 1e-12);
        assert!((circulation(g.graph(), &down, &l).unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(same, f);
    }
}
