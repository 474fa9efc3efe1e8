//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use holeflux::gauge::LinkField;
use holeflux::geometry::{DomainSpec, GridDomain, LatticeLoop, Shape};
use holeflux::graph::Graph;
use holeflux::operator::HamiltonianMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn small_annulus() -> DomainSpec {
    DomainSpec::annulus(1.0, 0.3, 0.1)
}

pub fn two_holes(h: f64) -> DomainSpec {
    DomainSpec {
        outer: Shape::disk([0.0, 0.0], 1.0),
        holes: vec![Shape::disk([-0.4, 0.05], 0.15), Shape::disk([0.45, -0.1], 0.2)],
        spacing: h,
    }
}

/// Winding number of a closed polygon around `c`, by accumulating the
/// principal angle of each step (no shared code with the library).
pub fn winding_number(points: &[[f64; 2]], c: [f64; 2]) -> f64 {
    let mut total = 0.0;
    for k in 0..points.len() {
        let a = points[k];
        let b = points[(k + 1) % points.len()];
        let cross = (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]);
        let dot = (a[0] - c[0]) * (b[0] - c[0]) + (a[1] - c[1]) * (b[1] - c[1]);
        total += cross.atan2(dot);
    }
    total / TAU
}

pub fn loop_points(grid: &GridDomain, l: &LatticeLoop) -> Vec<[f64; 2]> {
    l.steps().iter().map(|s| grid.position(s[0])).collect()
}

/// Dense Neumann magnetic matrix built straight from the edge list.
pub fn dense_magnetic(graph: &Graph, field: &LinkField, potential: &[f64], h: f64) -> DMatrix<Complex64> {
    let n = graph.vertex_count();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let w = 1.0 / (h * h);
    for (e, &[a, b]) in graph.edges().iter().enumerate() {
        let t = field.phases()[e];
        m[(a, a)] += w;
        m[(b, b)] += w;
        m[(a, b)] -= Complex64::from_polar(w, -t);
        m[(b, a)] -= Complex64::from_polar(w, t);
    }
    for v in 0..n {
        m[(v, v)] += potential[v];
    }
    m
}

pub fn dense_of(h: &HamiltonianMatrix) -> DMatrix<Complex64> {
    let n = h.dim();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] = h.entry(r, c);
        }
    }
    m
}

pub fn sorted_eigs(m: DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Exact spectrum of the `n`-point magnetic circle: `(2 − 2cos((k − α)h))/h²`.
pub fn circle_lattice_spectrum(n: usize, alpha: f64) -> Vec<f64> {
    let h = TAU / n as f64;
    let mut v: Vec<f64> =
        (0..n).map(|k| (2.0 - 2.0 * ((k as f64 - alpha) * h).cos()) / (h * h)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Neumann path-graph eigenvalues `(2 − 2cos(πk/N))/h²`, `k = 0..N−1`.
pub fn path_spectrum(points: usize, h: f64) -> Vec<f64> {
    (0..points).map(|k| (2.0 - 2.0 * (PI * k as f64 / points as f64).cos()) / (h * h)).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn cnorm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Every small operator the tests exercise, for the dense-oracle comparison.
pub fn oracle_corpus() -> Vec<(String, HamiltonianMatrix)> {
    use holeflux::cover::{assemble_lifted, build_cover, deck_block, DeckParity};
    use holeflux::gauge::{aharonov_potential, FluxVector};
    use holeflux::geometry::build_grid;
    use holeflux::operator::{
        assemble_circle, assemble_circle_with_potential, assemble_magnetic, assemble_slit, BoundaryCondition,
        PotentialField, SlitPath,
    };

    let mut out = Vec::new();
    for n in [8, 16, 64, 256] {
        for alpha in [0.0, 0.3, 0.5] {
            out.push((format!("circle n={n} α={alpha}"), assemble_circle(n, alpha).unwrap()));
        }
    }
    let pot: Vec<f64> = (0..64).map(|j| 0.01 * (j as f64 * TAU / 64.0).cos()).collect();
    out.push(("perturbed circle".into(), assemble_circle_with_potential(64, 0.5, &pot).unwrap()));

    let square = DomainSpec { outer: Shape::rectangle([0.0, 0.0], [1.0, 1.0]), holes: vec![], spacing: 0.1 };
    let grid = build_grid(&square).unwrap();
    let v = PotentialField::from_fn(&grid, |[x, y]| 3.0 * x * y);
    let zero = LinkField::zero(grid.graph());
    for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
        out.push((format!("square {bc:?}"), assemble_magnetic(&grid, &zero, &v, bc).unwrap()));
    }

    let grid = build_grid(&small_annulus()).unwrap();
    let v0 = PotentialField::zero(grid.vertex_count());
    for phi in [0.0, 0.25, 0.5] {
        let field = aharonov_potential(&grid, &FluxVector(vec![phi])).unwrap();
        for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
            out.push((
                format!("annulus Φ={phi} {bc:?}"),
                assemble_magnetic(&grid, &field, &v0, bc).unwrap(),
            ));
        }
    }
    let slit = SlitPath::radial(&grid, [0.0, 0.0], 0.0).unwrap();
    out.push((
        "annulus slit".into(),
        assemble_slit(&grid, &LinkField::zero(grid.graph()), &v0, &slit).unwrap(),
    ));
    let half = aharonov_potential(&grid, &FluxVector(vec![0.5])).unwrap();
    let cover = build_cover(grid.graph(), &half).unwrap();
    let lifted = assemble_lifted(&cover, grid.spacing(), &v0).unwrap();
    out.push(("annulus cover antisymmetric".into(), deck_block(&lifted, DeckParity::Antisymmetric)));
    out.push(("annulus cover symmetric".into(), deck_block(&lifted, DeckParity::Symmetric)));
    out.push(("annulus cover".into(), lifted));

    let grid = build_grid(&two_holes(0.1)).unwrap();
    let field = aharonov_potential(&grid, &FluxVector(vec![0.5, 0.5])).unwrap();
    let v0 = PotentialField::zero(grid.vertex_count());
    out.push((
        "two holes half flux".into(),
        assemble_magnetic(&grid, &field, &v0, BoundaryCondition::Neumann).unwrap(),
    ));

    out.retain(|(_, h)| h.dim() <= 400);
    out
}
