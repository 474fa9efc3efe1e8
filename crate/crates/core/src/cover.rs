//! Twofold cover of a lattice with half-integer circulations.
//!
//! Cover vertices are `(v, s)` with sheet `s ∈ {0, 1}`, numbered `2v + s`.
//! Each base edge lifts to two cover edges; a *cut* edge joins opposite
//! sheets. Cuts come from a BFS spanning tree of the base: tree edges never
//! cut, and a non-tree edge cuts iff the fundamental cycle it closes carries
//! circulation in `1/2 + ℤ`. The deck map `G` swaps sheets.
//!
//! On the cover the half-flux problem becomes real: the phase `θ̃` integrated
//! from the lifted link phases satisfies `e^{iθ̃(Gx)} = −e^{iθ̃(x)}`, and
//! `L u = e^{−iθ̃} ũ / √2` maps magnetic eigenvectors onto antisymmetric
//! eigenvectors of the plain lattice Laplacian on the cover.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauge::LinkField;
use crate::geometry::LatticeLoop;
use crate::graph::Graph;
use crate::operator::{assemble_on_graph, BoundaryTag, HamiltonianMatrix, PotentialField};
use crate::sparse::CsrMatrix;

/// Circulations closer than this (in flux quanta) to `½ℤ` are accepted.
pub const HALF_INTEGER_TOL: f64 = 1e-9;

#[inline]
pub fn cover_vertex(v: usize, sheet: usize) -> usize {
    2 * v + sheet
}

#[inline]
pub fn deck(x: usize) -> usize {
    x ^ 1
}

#[inline]
pub fn project(x: usize) -> usize {
    x / 2
}

#[inline]
pub fn sheet(x: usize) -> usize {
    x & 1
}

#[derive(Clone, Debug)]
pub struct CoverGraph {
    base: Graph,
    cuts: Vec<bool>,
    graph: Graph,
    connected: bool,
}

/// Builds the cover; fails if some fundamental cycle has a circulation
/// outside `½ℤ`.
pub fn build_cover(base: &Graph, field: &LinkField) -> Result<CoverGraph> {
    if field.edge_count() != base.edge_count() {
        return Err(Error::InconsistentSizes(format!(
            "link field has {} phases for {} edges",
            field.edge_count(),
            base.edge_count()
        )));
    }
    let forest = base.spanning_forest();
    let potential = forest.integrate(|e| field.phases()[e]);
    let mut cuts = vec![false; base.edge_count()];
    for (e, &[a, b]) in base.edges().iter().enumerate() {
        if forest.is_tree_edge(e) {
            continue;
        }
        let half_quanta = (potential[a] + field.phases()[e] - potential[b]) / PI;
        let nearest = half_quanta.round();
        if (half_quanta - nearest).abs() > 2.0 * HALF_INTEGER_TOL {
            return Err(Error::NonHalfIntegerFlux { value: half_quanta / 2.0 });
        }
        cuts[e] = nearest.rem_euclid(2.0) == 1.0;
    }
    let mut edges = Vec::with_capacity(2 * base.edge_count());
    for (e, &[a, b]) in base.edges().iter().enumerate() {
        let flip = usize::from(cuts[e]);
        for s in 0..2 {
            edges.push([cover_vertex(a, s), cover_vertex(b, s ^ flip)]);
        }
    }
    let graph = Graph::new(2 * base.vertex_count(), edges);
    let connected = graph.components().1 == 1;
    Ok(CoverGraph { base: base.clone(), cuts, graph, connected })
}

impl CoverGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cuts(&self) -> &[bool] {
        &self.cuts
    }

    pub fn is_cut(&self, base_edge: usize) -> bool {
        self.cuts[base_edge]
    }

    /// `false` for integer fluxes: the cover is two disjoint copies of the base.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_trivial(&self) -> bool {
        !self.connected
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Cover edge lifting base edge `e` whose tail sits on sheet `s`.
    pub fn lifted_edge(&self, e: usize, s: usize) -> usize {
        2 * e + s
    }

    /// Sheet reached from sheet `s` by crossing base edge `e`.
    pub fn cross(&self, e: usize, s: usize) -> usize {
        s ^ usize::from(self.cuts[e])
    }

    /// Parity of cut crossings along a closed base loop.
    pub fn loop_parity(&self, lattice_loop: &LatticeLoop) -> Result<bool> {
        let mut parity = false;
        for &[tail, head] in lattice_loop.steps() {
            let inc = self.base.find_edge(tail, head).ok_or(Error::MissingEdge { tail, head })?;
            parity ^= self.cuts[inc.edge];
        }
        Ok(parity)
    }

    /// Copies base link phases onto both lifts of every edge.
    pub fn lift_field(&self, field: &LinkField) -> LinkField {
        LinkField::from_phases(field.phases().iter().flat_map(|&t| [t, t]).collect())
    }

    pub fn lift_potential(&self, potential: &PotentialField) -> PotentialField {
        PotentialField(potential.0.iter().flat_map(|&v| [v, v]).collect())
    }

    /// Lift of a base function: `ũ(x) = u(Π x)`.
    pub fn lift_function<T: Copy>(&self, u: &[T]) -> Vec<T> {
        u.iter().flat_map(|&x| [x, x]).collect()
    }

    /// Checks that `G` is a fixed-point-free involution commuting with adjacency.
    pub fn deck_commutes_with_adjacency(&self) -> bool {
        (0..self.vertex_count()).all(|x| {
            let gx = deck(x);
            if gx == x || deck(gx) != x {
                return false;
            }
            let mut a: Vec<usize> = self.graph.incidences(x).iter().map(|i| deck(i.neighbor)).collect();
            let mut b: Vec<usize> = self.graph.incidences(gx).iter().map(|i| i.neighbor).collect();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    }
}

/// `−Δ̃ + Ṽ` with Neumann conditions on the cover: a real symmetric matrix.
pub fn assemble_lifted(cover: &CoverGraph, spacing: f64, potential: &PotentialField) -> Result<HamiltonianMatrix> {
    let lifted = cover.lift_potential(potential);
    let n = cover.vertex_count();
    assemble_on_graph(
        cover.graph(),
        spacing,
        &LinkField::zero(cover.graph()),
        &lifted,
        &vec![false; n],
        BoundaryTag::Cover,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeckParity {
    /// `f ∘ G = f`
    Symmetric,
    /// `f ∘ G = −f`
    Antisymmetric,
}

/// Restriction of a cover operator commuting with `G` to the symmetric or
/// antisymmetric functions, in the basis `(δ_(v,0) ± δ_(v,1)) / √2`.
pub fn deck_block(lifted: &HamiltonianMatrix, parity: DeckParity) -> HamiltonianMatrix {
    let sigma = |s: usize| match (parity, s) {
        (DeckParity::Antisymmetric, 1) => -1.0,
        _ => 1.0,
    };
    let n = lifted.dim() / 2;
    let triplets = lifted
        .matrix()
        .triplets()
        .map(|(r, c, v)| (project(r), project(c), v * (0.5 * sigma(sheet(r)) * sigma(sheet(c)))))
        .filter(|(_, _, v)| *v != Complex64::new(0.0, 0.0))
        .collect();
    let matrix = CsrMatrix::from_triplets(n, triplets);
    HamiltonianMatrix::from_parts(matrix, (0..n).collect(), n, BoundaryTag::Cover)
}

/// Antisymmetric basis vector expansion: `(P f)(v, s) = ±f(v)/√2`.
pub fn expand_antisymmetric(f: &[Complex64]) -> Vec<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    f.iter().flat_map(|&x| [x * scale, -x * scale]).collect()
}

/// Phase `θ̃` on cover vertices with `θ̃(head) − θ̃(tail) = θ(e)` along a
/// spanning tree of the cover.
#[derive(Clone, Debug)]
pub struct ThetaField {
    values: Vec<f64>,
}

pub fn build_theta(cover: &CoverGraph, field: &LinkField) -> Result<ThetaField> {
    if !cover.is_connected() {
        return Err(Error::TrivialCover);
    }
    let lifted = cover.lift_field(field);
    let forest = cover.graph().spanning_forest();
    let values = forest.integrate(|e| lifted.phases()[e]);
    let theta = ThetaField { values };
    for (e, &[a, b]) in cover.graph().edges().iter().enumerate() {
        if forest.is_tree_edge(e) {
            continue;
        }
        let mismatch = theta.values[b] - theta.values[a] - lifted.phases()[e];
        let off = mismatch - TAU * (mismatch / TAU).round();
        if off.abs() > 1e-10 {
            return Err(Error::InconsistentHolonomy { edge: e, mismatch });
        }
    }
    Ok(theta)
}

impl ThetaField {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `max |e^{iθ̃(head)} − e^{iθ̃(tail)} e^{iθ(e)}|` over all cover edges.
    pub fn single_valuedness_residual(&self, cover: &CoverGraph, field: &LinkField) -> f64 {
        let lifted = cover.lift_field(field);
        cover
            .graph()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &[a, b])| {
                (Complex64::from_polar(1.0, self.values[b])
                    - Complex64::from_polar(1.0, self.values[a] + lifted.phases()[e]))
                .norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |e^{iθ̃(Gx)} + e^{iθ̃(x)}|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        (0..self.values.len() / 2)
            .map(|v| {
                (Complex64::from_polar(1.0, self.values[2 * v]) + Complex64::from_polar(1.0, self.values[2 * v + 1]))
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `L u = e^{−iθ̃} ũ / √2`.
pub fn lift_l(u: &[Complex64], theta: &ThetaField) -> Vec<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    theta
        .values
        .iter()
        .enumerate()
        .map(|(x, &t)| Complex64::from_polar(scale, -t) * u[project(x)])
        .collect()
}

/// Real function proportional to `L u`, rotated by the phase of its largest
/// entry. Returns the function and `max |Im| / max |·|` before discarding the
/// imaginary part.
pub fn real_lift(u: &[Complex64], theta: &ThetaField) -> (Vec<f64>, f64) {
    let lu = lift_l(u, theta);
    let peak = lu.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
    if peak.norm() == 0.0 {
        return (vec![0.0; lu.len()], 0.0);
    }
    let rot = peak.conj() / peak.norm();
    let rotated: Vec<Complex64> = lu.iter().map(|z| z * rot).collect();
    let spread = rotated.iter().map(|z| z.im.abs()).fold(0.0, f64::max) / peak.norm();
    (rotated.iter().map(|z| z.re).collect(), spread)
}

/// Antilinear symmetry `K u = e^{iψ} ū` of a half-flux operator, with
/// `ψ(head) − ψ(tail) = 2θ(e)` along a base spanning tree.
#[derive(Clone, Debug)]
pub struct KOperator {
    psi: Vec<f64>,
}

impl KOperator {
    pub fn new(base: &Graph, field: &LinkField) -> Result<Self> {
        let forest = base.spanning_forest();
        let psi = forest.integrate(|e| 2.0 * field.phases()[e]);
        for (e, &[a, b]) in base.edges().iter().enumerate() {
            if forest.is_tree_edge(e) {
                continue;
            }
            let quanta = (psi[a] + 2.0 * field.phases()[e] - psi[b]) / TAU;
            if (quanta - quanta.round()).abs() > 2.0 * HALF_INTEGER_TOL {
                return Err(Error::NonHalfIntegerFlux { value: quanta / 2.0 });
            }
        }
        Ok(Self { psi })
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        u.iter().zip(&self.psi).map(|(z, &p)| Complex64::from_polar(1.0, p) * z.conj()).collect()
    }
}

pub fn k_operator(u: &[Complex64], base: &Graph, field: &LinkField) -> Result<Vec<Complex64>> {
    Ok(KOperator::new(base, field)?.apply(u))
}

fn real_inner(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// Orthonormal basis of K-fixed vectors spanning the same space as `basis`
/// (which must be K-invariant). Candidates `u + Ku` and `i(u − Ku)` are
/// orthonormalized in the real inner product `Re⟨·,·⟩`; for K-fixed vectors
/// that inner product equals the complex one.
pub fn real_representatives(basis: &[Vec<Complex64>], k: &KOperator) -> Result<Vec<Vec<Complex64>>> {
    let i = Complex64::new(0.0, 1.0);
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(basis.len());
    for u in basis {
        let ku = k.apply(u);
        let plus: Vec<Complex64> = u.iter().zip(&ku).map(|(a, b)| a + b).collect();
        let minus: Vec<Complex64> = u.iter().zip(&ku).map(|(a, b)| i * (a - b)).collect();
        for mut c in [plus, minus] {
            if out.len() == basis.len() {
                break;
            }
            for _pass in 0..2 {
                for q in &out {
                    let p = real_inner(q, &c);
                    for (ci, qi) in c.iter_mut().zip(q) {
                        *ci -= qi * p;
                    }
                }
            }
            let norm = real_inner(&c, &c).sqrt();
            if norm > 1e-6 {
                for ci in c.iter_mut() {
                    *ci /= norm;
                }
                out.push(c);
            }
        }
    }
    if out.len() < basis.len() {
        return Err(Error::DegenerateProjection);
    }
    Ok(out)
}

/// First K-fixed representative of the span.
pub fn real_representative(basis: &[Vec<Complex64>], k: &KOperator) -> Result<Vec<Complex64>> {
    real_representatives(basis, k)?.into_iter().next().ok_or(Error::DegenerateProjection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::circle_field;

    #[test]
    fn circle_half_flux_cover_is_one_cycle() {
        let n = 8;
        let cover = build_cover(&Graph::cycle(n), &circle_field(n, 0.5)).unwrap();
        assert!(cover.is_connected());
        assert_eq!(cover.cuts().iter().filter(|c| **c).count(), 1);
        assert!(cover.deck_commutes_with_adjacency());
        assert!((0..2 * n).all(|x| cover.graph().degree(x) == 2));
    }

    #[test]
    fn integer_flux_cover_is_trivial() {
        let n = 16;
        let cover = build_cover(&Graph::cycle(n), &circle_field(n, 1.0)).unwrap();
        assert!(cover.is_trivial());
        assert!(matches!(build_theta(&cover, &circle_field(n, 1.0)), Err(Error::TrivialCover)));
    }

    #[test]
    fn generic_flux_rejected() {
        let n = 16;
        assert!(matches!(
            build_cover(&Graph::cycle(n), &circle_field(n, 0.3)),
            Err(Error::NonHalfIntegerFlux { .. })
        ));
        assert!(matches!(
            KOperator::new(&Graph::cycle(n), &circle_field(n, 0.3)),
            Err(Error::NonHalfIntegerFlux { .. })
        ));
    }

    #[test]
    fn k_of_real_zero_flux_vector_is_identity() {
        let n = 12;
        let k = KOperator::new(&Graph::cycle(n), &circle_field(n, 0.0)).unwrap();
        let u: Vec<Complex64> = (0..n).map(|j| Complex64::new(j as f64, 0.0)).collect();
        assert_eq!(k.apply(&u), u);
    }

    #[test]
    fn zero_vector_lifts_to_zero() {
        let n = 8;
        let field = circle_field(n, 0.5);
        let cover = build_cover(&Graph::cycle(n), &field).unwrap();
        let theta = build_theta(&cover, &field).unwrap();
        assert!(lift_l(&vec![Complex64::default(); n], &theta).iter().all(|z| z.norm() == 0.0));
    }
}
