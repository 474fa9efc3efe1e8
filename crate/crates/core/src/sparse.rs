//! Compressed-row matrices and an envelope Cholesky factorization.

use std::collections::VecDeque;

use nalgebra::ComplexField;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Field of matrix entries: `f64` for real symmetric problems, `Complex64`
/// for Hermitian ones.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync {
    fn sample(rng: &mut impl Rng) -> Self;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn sample(rng: &mut impl Rng) -> Self {
        rng.gen_range(-1.0..1.0)
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn sample(rng: &mut impl Rng) -> Self {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn to_complex(self) -> Complex64 {
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds a square matrix, summing duplicate entries.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, T)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut vals: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside {dim}x{dim}");
            if last == Some((r, c)) {
                let tail = vals.last_mut().expect("duplicate follows an entry");
                *tail += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { dim, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[T]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.cols[span.clone()], &self.vals[span])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map_or(T::zero(), |k| vals[k])
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.dim).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn mul_vec(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            let mut acc = T::zero();
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            *out = acc;
        }
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.dim];
        self.mul_vec(x, &mut y);
        y
    }

    /// `max_r Σ_c |a_rc|`, an upper bound on the spectral norm of a Hermitian matrix.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim)
            .map(|r| self.row(r).1.iter().map(|v| v.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Gershgorin lower bound on the spectrum of a Hermitian matrix.
    pub fn gershgorin_lower(&self) -> f64 {
        (0..self.dim)
            .map(|r| {
                let (cols, vals) = self.row(r);
                let mut diag = 0.0;
                let mut off = 0.0;
                for (&c, v) in cols.iter().zip(vals) {
                    if c == r {
                        diag = v.real();
                    } else {
                        off += v.modulus();
                    }
                }
                diag - off
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        CsrMatrix {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.vals
    }
}

/// Reverse Cuthill–McKee ordering of the symmetric sparsity pattern.
/// Returns `order[new] = old`.
pub fn reverse_cuthill_mckee<T: Scalar>(a: &CsrMatrix<T>) -> Vec<usize> {
    let n = a.dim();
    let neighbors = |v: usize| a.row(v).0.iter().copied().filter(move |&w| w != v);
    let degree: Vec<usize> = (0..n).map(|v| neighbors(v).count()).collect();

    let bfs_levels = |start: usize, visited: &[bool]| -> Vec<Vec<usize>> {
        let mut seen = visited.to_vec();
        seen[start] = true;
        let mut levels = vec![vec![start]];
        loop {
            let mut next = Vec::new();
            for &v in levels.last().expect("non-empty") {
                for w in neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                return levels;
            }
            levels.push(next);
        }
    };

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let mut start = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("unvisited vertex");
        // pseudo-peripheral start vertex
        let mut depth = bfs_levels(start, &visited).len();
        for _ in 0..8 {
            let levels = bfs_levels(start, &visited);
            let candidate = *levels
                .last()
                .expect("non-empty")
                .iter()
                .min_by_key(|&&v| (degree[v], v))
                .expect("non-empty level");
            let cand_depth = bfs_levels(candidate, &visited).len();
            if cand_depth <= depth {
                break;
            }
            start = candidate;
            depth = cand_depth;
        }
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = neighbors(v).filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// `P (A + σI) Pᵀ = L Lᴴ` stored row by row inside the envelope of the
/// permuted matrix. Fill-in never leaves the envelope.
#[derive(Clone, Debug)]
pub struct EnvelopeCholesky<T> {
    order: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> EnvelopeCholesky<T> {
    pub fn factor(a: &CsrMatrix<T>, shift: f64) -> Result<Self> {
        let n = a.dim();
        let order = reverse_cuthill_mckee(a);
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (r, c, _) in a.triplets() {
            let (i, j) = (position[r], position[c]);
            if j < i {
                first[i] = first[i].min(j);
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for i in 0..n {
            start.push(total);
            total += i - first[i] + 1;
        }
        start.push(total);
        let mut data = vec![T::zero(); total];
        for (r, c, v) in a.triplets() {
            let (i, j) = (position[r], position[c]);
            if j <= i {
                data[start[i] + j - first[i]] = v;
            }
        }
        for i in 0..n {
            data[start[i] + i - first[i]] += T::from_real(shift);
        }

        for i in 0..n {
            let (done, rest) = data.split_at_mut(start[i]);
            let row_i = &mut rest[..i - first[i] + 1];
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let row_j = &done[start[j]..start[j + 1]];
                let lo = fi.max(fj);
                let mut s = row_i[j - fi];
                let a_part = &row_i[lo - fi..j - fi];
                let b_part = &row_j[lo - fj..j - fj];
                for (x, y) in a_part.iter().zip(b_part) {
                    s -= *x * y.conjugate();
                }
                let pivot = row_j[j - fj].real();
                row_i[j - fi] = s.unscale(pivot);
            }
            let mut d = row_i[i - fi].real();
            for x in &row_i[..i - fi] {
                d -= x.modulus_squared();
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { row: order[i], pivot: d });
            }
            row_i[i - fi] = T::from_real(d.sqrt());
        }
        Ok(Self { order, first, start, data })
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `(A + σI) x = b`, overwriting `b` with `x`.
    pub fn solve_in_place(&self, b: &mut [T], work: &mut Vec<T>) {
        let n = self.dim();
        work.clear();
        work.extend(self.order.iter().map(|&old| b[old]));
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let mut s = work[i];
            for (l, y) in row[..i - fi].iter().zip(&work[fi..i]) {
                s -= *l * *y;
            }
            work[i] = s.unscale(row[i - fi].real());
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let xi = work[i].unscale(row[i - fi].real());
            work[i] = xi;
            for (l, y) in row[..i - fi].iter().zip(&mut work[fi..i]) {
                *y -= l.conjugate() * xi;
            }
        }
        for (new, &old) in self.order.iter().enumerate() {
            b[old] = work[new];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path_laplacian(n: usize) -> CsrMatrix<f64> {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 0, 2.0), (1, 0, 4.0)]);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 0), 4.0);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn rcm_is_a_permutation() {
        let m = path_laplacian(30);
        let mut order = reverse_cuthill_mckee(&m);
        order.sort_unstable();
        assert_eq!(order, (0..30).collect::<Vec<_>>());
    }

    #[test]
    fn cholesky_solves_hermitian_system() {
        let n = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, Complex64::new(4.0, 0.0)));
            let j = (i + 7) % n;
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            t.push((i, j, z));
            t.push((j, i, z.conj()));
        }
        let a = CsrMatrix::from_triplets(n, t);
        let chol = EnvelopeCholesky::factor(&a, 0.5).unwrap();
        let x: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let mut b = a.apply(&x);
        for (bi, xi) in b.iter_mut().zip(&x) {
            *bi += xi * 0.5;
        }
        let mut work = Vec::new();
        chol.solve_in_place(&mut b, &mut work);
        for (bi, xi) in b.iter().zip(&x) {
            assert!((bi - xi).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_rejected_without_shift() {
        let mut m = path_laplacian(5);
        m = CsrMatrix::from_triplets(
            5,
            m.triplets().map(|(r, c, v)| if r == c && (r == 0 || r == 4) { (r, c, 1.0) } else { (r, c, v) }).collect(),
        );
        assert!(matches!(EnvelopeCholesky::factor(&m, 0.0), Err(Error::NotPositiveDefinite { .. })));
        assert!(EnvelopeCholesky::factor(&m, 1e-3).is_ok());
    }
}
