mod common;

use common::*;
use holeflux::eigensolver::{dense_eigenvalues, lowest_eigenpairs, lowest_eigenpairs_with, SolverOptions};
use holeflux::gauge::{aharonov_potential, gauge_transform, integer_flux_shift, FluxVector, LinkField, VertexPhase};
use holeflux::geometry::{build_grid, DomainSpec, Shape};
use holeflux::operator::{assemble_circle, assemble_magnetic, BoundaryCondition, PotentialField, SlitPath};
use holeflux::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn annulus_operator(phi: f64, h: f64) -> holeflux::operator::HamiltonianMatrix {
    let grid = build_grid(&DomainSpec::annulus(1.0, 0.3, h)).unwrap();
    let field = aharonov_potential(&grid, &FluxVector(vec![phi])).unwrap();
    assemble_magnetic(&grid, &field, &PotentialField::zero(grid.vertex_count()), BoundaryCondition::Neumann).unwrap()
}

#[test]
fn assembly_matches_edge_list_oracle() {
    let grid = build_grid(&two_holes(0.1)).unwrap();
    let field = aharonov_potential(&grid, &FluxVector(vec![0.3, 0.7])).unwrap();
    let v = PotentialField::from_fn(&grid, |[x, y]| x - 2.0 * y);
    let h = assemble_magnetic(&grid, &field, &v, BoundaryCondition::Neumann).unwrap();
    let oracle = dense_magnetic(grid.graph(), &field, &v.0, grid.spacing());
    let diff = (dense_of(&h) - oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff < 1e-12, "{diff}");
    assert!(h.hermiticity_error() < 1e-14);
}

#[test]
fn iterative_matches_dense_on_corpus() {
    for (name, h) in oracle_corpus() {
        let m = 6.min(h.dim() - 1);
        let dense = dense_eigenvalues(&h);
        let it = lowest_eigenpairs(&h, m, 1e-10).unwrap();
        let err = max_abs_diff(&it.eigenvalues, &dense[..m]);
        assert!(err <= 1e-9, "{name}: {err:.2e}");
    }
}

#[test]
fn circle_matches_closed_form() {
    for (n, alpha) in [(8, 0.5), (64, 0.3), (256, 0.25)] {
        let exact = circle_lattice_spectrum(n, alpha);
        let got = lowest_eigenpairs(&assemble_circle(n, alpha).unwrap(), 5, 1e-10).unwrap().eigenvalues;
        assert!(max_abs_diff(&got, &exact[..5]) < 1e-9, "n={n} α={alpha}: {got:?}");
    }
}

#[test]
fn rectangle_neumann_spectrum_is_sum_of_path_spectra() {
    // 11 x 6 lattice points
    let spec = DomainSpec { outer: Shape::rectangle([0.0, 0.0], [1.0, 0.5]), holes: vec![], spacing: 0.1 };
    let grid = build_grid(&spec).unwrap();
    assert_eq!(grid.vertex_count(), 66);
    let h = assemble_magnetic(
        &grid,
        &LinkField::zero(grid.graph()),
        &PotentialField::zero(66),
        BoundaryCondition::Neumann,
    )
    .unwrap();
    let (px, py) = (path_spectrum(11, 0.1), path_spectrum(6, 0.1));
    let mut exact: Vec<f64> = px.iter().flat_map(|a| py.iter().map(move |b| a + b)).collect();
    exact.sort_by(f64::total_cmp);
    let got = lowest_eigenpairs(&h, 6, 1e-10).unwrap().eigenvalues;
    assert!(max_abs_diff(&got, &exact[..6]) < 1e-9, "{got:?} vs {:?}", &exact[..6]);
    assert!(got[0].abs() < 1e-9, "Neumann zero mode");
}

#[test]
fn dirichlet_and_slit_raise_the_ground_energy() {
    let grid = build_grid(&small_annulus()).unwrap();
    let zero = LinkField::zero(grid.graph());
    let v = PotentialField::zero(grid.vertex_count());
    let neu = assemble_magnetic(&grid, &zero, &v, BoundaryCondition::Neumann).unwrap();
    let dir = assemble_magnetic(&grid, &zero, &v, BoundaryCondition::Dirichlet).unwrap();
    let slit = SlitPath::radial(&grid, [0.0, 0.0], 1.0).unwrap();
    let sl = holeflux::operator::assemble_slit(&grid, &zero, &v, &slit).unwrap();
    let l = |h| lowest_eigenpairs(h, 1, 1e-10).unwrap().eigenvalues[0];
    let (a, b, c) = (l(&neu), l(&sl), l(&dir));
    assert!(a < b && b < c, "{a} {b} {c}");
}

#[test]
fn spectra_are_gauge_covariant() {
    let grid = build_grid(&small_annulus()).unwrap();
    let field = aharonov_potential(&grid, &FluxVector(vec![0.3])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let chi = VertexPhase((0..grid.vertex_count()).map(|_| rng.gen_range(-10.0..10.0)).collect());
    let moved = gauge_transform(grid.graph(), &field, &chi).unwrap();
    let v = PotentialField::zero(grid.vertex_count());
    let a = dense_eigenvalues(&assemble_magnetic(&grid, &field, &v, BoundaryCondition::Neumann).unwrap());
    let b = dense_eigenvalues(&assemble_magnetic(&grid, &moved, &v, BoundaryCondition::Neumann).unwrap());
    assert!(max_abs_diff(&a, &b) < 1e-9);
    let shifted = integer_flux_shift(&grid, &field, &[-3]).unwrap();
    let c = dense_eigenvalues(&assemble_magnetic(&grid, &shifted, &v, BoundaryCondition::Neumann).unwrap());
    assert!(max_abs_diff(&a, &c) < 1e-9);
}

#[test]
fn conjugate_flux_gives_same_spectrum() {
    let a = lowest_eigenpairs(&annulus_operator(0.3, 0.05), 4, 1e-10).unwrap().eigenvalues;
    let b = lowest_eigenpairs(&annulus_operator(-0.3, 0.05), 4, 1e-10).unwrap().eigenvalues;
    let c = lowest_eigenpairs(&annulus_operator(0.7, 0.05), 4, 1e-10).unwrap().eigenvalues;
    assert!(max_abs_diff(&a, &b) < 1e-10 && max_abs_diff(&a, &c) < 1e-10, "{a:?} {b:?} {c:?}");
}

#[test]
fn results_are_deterministic() {
    let h = annulus_operator(0.25, 0.05);
    let opts = SolverOptions::default();
    let a = lowest_eigenpairs_with(&h, 3, &opts).unwrap();
    let b = lowest_eigenpairs_with(&h, 3, &opts).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.eigenvectors, b.eigenvectors);
}

#[test]
fn eigenvectors_are_orthonormal_with_small_residuals() {
    let h = annulus_operator(0.5, 0.05);
    let r = lowest_eigenpairs(&h, 4, 1e-10).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let d = cdot(&r.eigenvectors[i], &r.eigenvectors[j]);
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((d - Complex64::new(expected, 0.0)).norm() < 1e-10);
        }
        assert!(r.residuals[i] <= r.residual_tolerance);
    }
}

#[test]
fn rejects_bad_requests() {
    let h = annulus_operator(0.0, 0.1);
    assert!(matches!(lowest_eigenpairs(&h, h.dim(), 1e-10), Err(Error::InvalidRequest(_))));
    assert!(matches!(assemble_circle(4, 0.0), Err(Error::TooFewPoints(4))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rayleigh_quotients_bound_the_ground_energy(phi in -1.0f64..1.0, seed in 0u64..10_000) {
        let h = annulus_operator(phi, 0.1);
        let l1 = lowest_eigenpairs(&h, 1, 1e-10).unwrap().eigenvalues[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let x: Vec<Complex64> =
                (0..h.dim()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            prop_assert!(h.rayleigh_quotient(&x) >= l1 - 1e-9);
        }
    }

    #[test]
    fn diamagnetic_inequality(phi in -2.0f64..2.0) {
        let l0 = lowest_eigenpairs(&annulus_operator(0.0, 0.1), 1, 1e-10).unwrap().eigenvalues[0];
        let l = lowest_eigenpairs(&annulus_operator(phi, 0.1), 1, 1e-10).unwrap().eigenvalues[0];
        prop_assert!(l >= l0 - 1e-10);
    }

    #[test]
    fn spectrum_periodic_in_flux(phi in -1.0f64..1.0, shift in -2i64..3) {
        let a = dense_eigenvalues(&annulus_operator(phi, 0.1));
        let b = dense_eigenvalues(&annulus_operator(phi + shift as f64, 0.1));
        prop_assert!(max_abs_diff(&a, &b) < 1e-9);
    }
}
