//! Lowest eigenpairs of sparse Hermitian matrices.
//!
//! Block Krylov iteration on `(H + cI)⁻¹`, where the shift `c` makes the
//! matrix positive definite and the inverse is applied through an envelope
//! Cholesky factorization. Every new block is reorthogonalized against the
//! whole basis (two Gram–Schmidt passes), and eigenvalue estimates come from a
//! Rayleigh–Ritz projection of `H` itself onto the basis, so residuals are
//! measured on the original operator. The block is `m + 2` wide, enough to
//! resolve the doubly degenerate half-flux ground states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator::HamiltonianMatrix;
use crate::sparse::{CsrMatrix, EnvelopeCholesky, Scalar};

pub const DEFAULT_SEED: u64 = 0x5EED;
/// Relative cluster width for degeneracies protected by an exact symmetry.
pub const CLUSTER_TOL_EXACT: f64 = 1e-6;
/// Relative cluster width for staircase-approximated domains.
pub const CLUSTER_TOL_LATTICE: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Residual tolerance relative to the `‖H‖` estimate.
    pub tol: f64,
    pub seed: u64,
    /// Block width beyond the requested count.
    pub extra_block: usize,
    /// Blocks kept in the basis before a thick restart.
    pub max_blocks: usize,
    pub max_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, seed: DEFAULT_SEED, extra_block: 2, max_blocks: 40, max_restarts: 20 }
    }
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `‖H u − λ u‖₂` per pair.
    pub residuals: Vec<f64>,
    pub norm_estimate: f64,
    /// Absolute residual threshold that was enforced (`tol · ‖H‖`).
    pub residual_tolerance: f64,
    /// Number of blocks generated.
    pub iterations: usize,
}

impl EigenResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn lowest_eigenpairs(h: &HamiltonianMatrix, m: usize, tol: f64) -> Result<EigenResult> {
    lowest_eigenpairs_with(h, m, &SolverOptions { tol, ..SolverOptions::default() })
}

pub fn lowest_eigenpairs_with(h: &HamiltonianMatrix, m: usize, opts: &SolverOptions) -> Result<EigenResult> {
    match h.to_real() {
        Some(real) => lowest_of(&real, m, opts),
        None => lowest_of(h.matrix(), m, opts),
    }
}

/// Same as [`lowest_eigenpairs_with`] for a bare sparse matrix.
pub fn lowest_of<T: Scalar>(a: &CsrMatrix<T>, m: usize, opts: &SolverOptions) -> Result<EigenResult> {
    let n = a.dim();
    if m == 0 || m >= n {
        return Err(Error::InvalidRequest(format!("asked for {m} eigenpairs of a {n}x{n} matrix")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidRequest(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let block = (m + opts.extra_block.max(2)).min(n);
    let norm = a.max_row_sum();
    let abs_tol = opts.tol * norm;
    let shift = (-a.gershgorin_lower()).max(0.0) + 1.0 + 1e-8 * norm;
    let chol = EnvelopeCholesky::factor(a, shift)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut start: Vec<Vec<T>> = (0..block).map(|_| random_vector(n, &mut rng)).collect();
    let mut iterations = 0;
    let mut best = vec![f64::INFINITY; m];
    let mut work = Vec::new();

    for _restart in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<T>> = Vec::new();
        let mut image: Vec<Vec<T>> = Vec::new();
        let mut gram: Vec<Vec<T>> = Vec::new();
        let mut pending = std::mem::take(&mut start);
        loop {
            let before = basis.len();
            extend_basis(&mut basis, pending, n, &mut rng);
            let added = basis.len() - before;
            for j in before..basis.len() {
                image.push(a.apply(&basis[j]));
            }
            for row in gram.iter_mut() {
                row.resize(basis.len(), T::zero());
            }
            gram.resize(basis.len(), vec![T::zero(); basis.len()]);
            for j in before..basis.len() {
                for i in 0..=j {
                    let g = dot(&basis[i], &image[j]);
                    gram[i][j] = g;
                    gram[j][i] = g.conjugate();
                }
                gram[j][j] = T::from_real(gram[j][j].real());
            }
            iterations += 1;

            let k = basis.len();
            let (values, coeffs) = ritz(&gram, block.min(k));
            let exhausted = k == n || added == 0;
            let mut vectors = Vec::with_capacity(values.len());
            let mut residuals = Vec::with_capacity(values.len());
            for (theta, s) in values.iter().zip(&coeffs) {
                let y = combine(&basis, s, n);
                let z = combine(&image, s, n);
                let r = z.iter().zip(&y).map(|(zi, yi)| (*zi - yi.scale(*theta)).modulus_squared()).sum::<f64>();
                residuals.push(r.sqrt());
                vectors.push(y);
            }
            for (b, r) in best.iter_mut().zip(&residuals) {
                *b = b.min(*r);
            }
            let converged = residuals.iter().take(m).all(|&r| r <= abs_tol);
            if converged || exhausted {
                return Ok(finish(a, &values[..m], &vectors[..m], norm, abs_tol, iterations));
            }
            if k + block > opts.max_blocks * block {
                start = vectors;
                break;
            }
            let last = &basis[before..];
            pending = last
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    chol.solve_in_place(&mut w, &mut work);
                    w
                })
                .collect();
        }
    }
    Err(Error::NoConvergence { iterations, residuals: best })
}

fn finish<T: Scalar>(
    a: &CsrMatrix<T>,
    values: &[f64],
    vectors: &[Vec<T>],
    norm: f64,
    abs_tol: f64,
    iterations: usize,
) -> EigenResult {
    let mut residuals = Vec::with_capacity(values.len());
    let mut eigenvectors = Vec::with_capacity(values.len());
    for (theta, y) in values.iter().zip(vectors) {
        let hy = a.apply(y);
        let r: f64 = hy.iter().zip(y).map(|(p, q)| (*p - q.scale(*theta)).modulus_squared()).sum();
        residuals.push(r.sqrt());
        eigenvectors.push(y.iter().map(|x| x.to_complex()).collect());
    }
    EigenResult {
        eigenvalues: values.to_vec(),
        eigenvectors,
        residuals,
        norm_estimate: norm,
        residual_tolerance: abs_tol,
        iterations,
    }
}

fn random_vector<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    (0..n).map(|_| T::sample(rng)).collect()
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.conjugate() * *y)
}

fn norm<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
}

fn combine<T: Scalar>(vectors: &[Vec<T>], coeffs: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    for (v, &c) in vectors.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * *x;
        }
    }
    out
}

/// Appends the candidates to an orthonormal basis, two Gram–Schmidt passes
/// each; numerically dependent candidates are replaced by random vectors.
fn extend_basis<T: Scalar>(basis: &mut Vec<Vec<T>>, candidates: Vec<Vec<T>>, n: usize, rng: &mut ChaCha8Rng) {
    for mut c in candidates {
        for _attempt in 0..4 {
            if basis.len() >= n {
                return;
            }
            let before = norm(&c);
            if before > 0.0 {
                for _pass in 0..2 {
                    for q in basis.iter() {
                        let p = dot(q, &c);
                        for (ci, qi) in c.iter_mut().zip(q) {
                            *ci -= p * *qi;
                        }
                    }
                }
                let after = norm(&c);
                if after > 1e-8 * before {
                    let inv = 1.0 / after;
                    for ci in c.iter_mut() {
                        *ci = ci.scale(inv);
                    }
                    basis.push(c);
                    break;
                }
            }
            c = random_vector(n, rng);
        }
    }
}

/// Lowest `count` eigenpairs of the projected Hermitian matrix, ascending.
fn ritz<T: Scalar>(gram: &[Vec<T>], count: usize) -> (Vec<f64>, Vec<Vec<T>>) {
    let k = gram.len();
    let g = DMatrix::from_fn(k, k, |i, j| gram[i][j]);
    let eig = g.symmetric_eigen();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx[..count].iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = idx[..count].iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    (values, vectors)
}

/// All eigenvalues by dense Hermitian diagonalization, ascending.
pub fn dense_eigenvalues(h: &HamiltonianMatrix) -> Vec<f64> {
    let n = h.dim();
    let mut dense = DMatrix::<Complex64>::zeros(n, n);
    for (r, c, v) in h.matrix().triplets() {
        dense[(r, c)] = v;
    }
    let mut values: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Size of the leading cluster `{λᵢ : λᵢ − λ₁ ≤ cluster_tol·(1 + |λ₁|)}`.
pub fn multiplicity_estimate(eigs: &[f64], cluster_tol: f64) -> usize {
    let Some(&first) = eigs.first() else { return 0 };
    let width = cluster_tol * (1.0 + first.abs());
    eigs.iter().take_while(|&&l| l - first <= width).count()
}
