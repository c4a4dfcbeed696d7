//! Small dense matrices over a generic [`Scalar`].
//!
//! This is deliberately not a linear-algebra library: it is the minimal set of
//! exact operations the workbench needs — products, Kronecker products for the
//! recursive gamma construction, row reduction with mode-aware pivoting (exact
//! zero tests for Gaussian rationals, a magnitude threshold for floats), kernel
//! bases, and a Faddeev–LeVerrier characteristic polynomial for the small
//! exact cross-checks.  Floating eigen decompositions live in `spectrum`, which
//! converts to `nalgebra` at the boundary.

use crate::scalar::{Scalar, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn scale(&self, s: &S) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.mul(s)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matmul shape mismatch");
        let mut out: Mat<S> = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        let mut out = vec![S::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = S::zero();
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                acc.add_assign(&a.mul(&v[j]));
            }
            out[i] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut t = S::zero();
        for i in 0..self.rows {
            t.add_assign(self.get(i, i));
        }
        t
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out = Mat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * o.rows + k, j * o.cols + l, a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal `diag(a, b)`.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let mut out = Mat::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        out
    }

    /// Largest entry magnitude; the residual norm for matrix identities.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `max |self - o|`.
    pub fn distance(&self, o: &Self) -> f64 {
        self.sub(o).max_abs()
    }

    pub fn is_scalar_multiple_of_identity(&self) -> Option<S> {
        assert_eq!(self.rows, self.cols);
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { c.clone() } else { S::zero() };
                if self.get(i, j) != &want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn to_c64(&self) -> Mat<C64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.to_c64()).collect(),
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    ///
    /// Pivots are chosen by largest magnitude within the column (deterministic:
    /// first maximum wins).  Entries of magnitude at most `zero_tol` count as
    /// zero; exact mode passes 0 so only true zeros are skipped.
    pub fn rref(&mut self, zero_tol: f64) -> Vec<usize> {
        self.rref_within(self.cols, zero_tol)
    }

    /// Like [`rref`](Self::rref) but only the first `pivot_cols` columns are
    /// eligible as pivots; row operations still act on the whole matrix.
    /// Useful for augmented systems where the right block must stay passive.
    pub fn rref_within(&mut self, pivot_cols: usize, zero_tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            // Find the best pivot in this column.
            let mut best: Option<(usize, f64)> = None;
            for r in row..self.rows {
                let mag = self.get(r, col).abs();
                if mag > zero_tol && best.map_or(true, |(_, m)| mag > m) {
                    best = Some((r, mag));
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(row, prow);
            let inv = S::one().div(self.get(row, col));
            for j in col..self.cols {
                let v = self.get(row, j).mul(&inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.cols {
                    let v = self.get(r, j).sub(&factor.mul(self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, zero_tol: f64) -> usize {
        let mut m = self.clone();
        m.rref(zero_tol).len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self, zero_tol: f64) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref(zero_tol);
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = m.get(prow, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Characteristic polynomial coefficients `[c_0, ..., c_{n-1}, 1]` of a
    /// square matrix, by the Faddeev–LeVerrier recursion.  Exact over exact
    /// scalars; intended for small matrices only.
    pub fn char_poly(&self) -> Vec<S> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = S::one();
        let mut mk = self.clone();
        for k in 1..=n {
            // c_{n-k} = -tr(M_k) / k
            let c = mk.trace().div(&S::from_int(k as i64)).neg();
            coeffs[n - k] = c.clone();
            if k < n {
                let mut shifted = mk;
                for i in 0..n {
                    let v = shifted.get(i, i).add(&c);
                    shifted.set(i, i, v);
                }
                mk = self.matmul(&shifted);
            }
        }
        coeffs
    }
}

/// Evaluate polynomial coefficients `[c_0, ..., c_d]` at a complex point.
pub fn eval_poly_c64(coeffs: &[C64], x: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Precomputed exact solver for `B c = rhs` where `B` has full column rank.
///
/// Stores a row transform `T` with `T B = [I; 0]`, so each solve is a single
/// matrix-vector product: coefficients are the leading entries of `T rhs` and
/// everything below reports the out-of-span residual.
pub struct RrefSolver<S> {
    t: Mat<S>,
    cols: usize,
}

impl<S: Scalar> RrefSolver<S> {
    /// `b`: rows = ambient coordinates, cols = basis vectors (independent).
    pub fn new(b: &Mat<S>, zero_tol: f64) -> Self {
        let rows = b.rows();
        let cols = b.cols();
        // Augment with the identity and reduce; the right block becomes T.
        let mut aug = Mat::zeros(rows, cols + rows);
        for i in 0..rows {
            for j in 0..cols {
                aug.set(i, j, b.get(i, j).clone());
            }
            aug.set(i, cols + i, S::one());
        }
        let pivots = aug.rref_within(cols, zero_tol);
        assert!(
            pivots.len() == cols && pivots.iter().enumerate().all(|(i, &p)| i == p),
            "basis matrix does not have full column rank"
        );
        let t = Mat::from_fn(rows, rows, |i, j| aug.get(i, cols + j).clone());
        RrefSolver { t, cols }
    }

    /// Returns `(coefficients, residual)`; the residual is the largest
    /// magnitude of the rhs component outside the column span.
    pub fn solve(&self, rhs: &[S]) -> (Vec<S>, f64) {
        let y = self.t.mul_vec(rhs);
        let coeffs = y[..self.cols].to_vec();
        let residual = y[self.cols..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        (coeffs, residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn m_exact(rows: usize, cols: usize, vals: &[i64]) -> Mat<Exact> {
        Mat::from_fn(rows, cols, |i, j| Exact::from_int(vals[i * cols + j]))
    }

    #[test]
    fn matmul_identity() {
        let a = m_exact(2, 2, &[1, 2, 3, 4]);
        let id = Mat::<Exact>::identity(2);
        assert_eq!(a.matmul(&id), a);
        assert_eq!(id.matmul(&a), a);
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = m_exact(2, 2, &[0, 1, 1, 0]);
        let b = m_exact(2, 2, &[1, 0, 0, -1]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k.get(0, 2), &Exact::from_int(1));
        assert_eq!(k.get(1, 3), &Exact::from_int(-1));
        assert_eq!(k.get(0, 0), &Exact::from_int(0));
    }

    #[test]
    fn exact_kernel_of_rank_deficient_matrix() {
        // Rows sum to zero: kernel contains (1,1,1)/scalings.
        let a = m_exact(2, 3, &[1, -2, 1, 2, -3, 1]);
        let ker = a.kernel_basis(0.0);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        for i in 0..2 {
            let mut acc = Exact::zero();
            for j in 0..3 {
                acc.add_assign(&a.get(i, j).mul(&v[j]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn char_poly_of_diagonal() {
        // diag(1, 2): p(x) = x^2 - 3x + 2
        let a = m_exact(2, 2, &[1, 0, 0, 2]);
        let p = a.char_poly();
        assert_eq!(p[0], Exact::from_int(2));
        assert_eq!(p[1], Exact::from_int(-3));
        assert_eq!(p[2], Exact::from_int(1));
    }

    #[test]
    fn rref_solver_expands_and_reports_residual() {
        // Columns (1,0,1) and (0,1,1) in R^3.
        let b = m_exact(3, 2, &[1, 0, 0, 1, 1, 1]);
        let solver = RrefSolver::new(&b, 0.0);
        let (c, r) = solver.solve(&[
            Exact::from_int(2),
            Exact::from_int(3),
            Exact::from_int(5),
        ]);
        assert_eq!(c, vec![Exact::from_int(2), Exact::from_int(3)]);
        assert_eq!(r, 0.0);
        let (_, r2) = solver.solve(&[
            Exact::from_int(2),
            Exact::from_int(3),
            Exact::from_int(4),
        ]);
        assert!(r2 > 0.5);
    }
}
