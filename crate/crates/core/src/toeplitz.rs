//! Symmetric Toeplitz matrices `T_n(f)` and a dense reference eigensolver.
//!
//! The solver is the classic two-stage scheme: Householder reduction to
//! tridiagonal form followed by implicit QL iterations with Wilkinson-type
//! shifts. Only eigenvalues are computed.

use crate::error::{Error, Result};
use crate::symbols::Symbol;

/// Coefficients below this magnitude are ignored when reporting bandwidth.
pub const BANDWIDTH_CUTOFF: f64 = 1e-30;

/// Maximum number of QL sweeps spent on a single eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 50;

// Trailing blocks smaller than this are updated on the calling thread.
#[cfg(feature = "parallel")]
const PARALLEL_MIN_ORDER: usize = 192;

/// A real symmetric Toeplitz matrix stored by its first column.
#[derive(Clone, Debug, PartialEq)]
pub struct ToeplitzMatrix {
    column: Vec<f64>,
    bandwidth: usize,
}

impl ToeplitzMatrix {
    /// Builds the matrix from its first column `c_0, ..., c_{n-1}`.
    ///
    /// # Panics
    /// If `column` is empty.
    pub fn from_column(column: Vec<f64>) -> Self {
        assert!(!column.is_empty(), "Toeplitz matrix must have order >= 1");
        let bandwidth = column
            .iter()
            .rposition(|c| c.abs() >= BANDWIDTH_CUTOFF)
            .unwrap_or(0);
        Self { column, bandwidth }
    }

    /// `T_n(f)` with exact Fourier coefficients of `symbol`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn build(symbol: &Symbol, n: usize) -> Self {
        assert!(n >= 1, "Toeplitz matrix must have order >= 1");
        let column = (0..n).map(|k| symbol.fourier_coeff(k as i64)).collect();
        Self::from_column(column)
    }

    pub fn order(&self) -> usize {
        self.column.len()
    }

    pub fn column(&self) -> &[f64] {
        &self.column
    }

    /// Largest `k` with a non-negligible coefficient `c_k`.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.column[i.abs_diff(j)]
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.order();
        let mut a = vec![0.0; n * n];
        for (i, row) in a.chunks_mut(n).enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.entry(i, j);
            }
        }
        a
    }

    /// All eigenvalues in non-decreasing order.
    pub fn eigenvalues_sorted(&self) -> Result<SpectrumVector> {
        let n = self.order();
        if n == 1 {
            return Ok(SpectrumVector(vec![self.column[0]]));
        }
        if self.bandwidth <= 1 {
            let diag = vec![self.column[0]; n];
            let off = vec![self.column[1]; n - 1];
            return tridiagonal_eigenvalues(diag, off);
        }
        symmetric_eigenvalues(self.to_dense(), n)
    }
}

/// Eigenvalues of a matrix, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumVector(Vec<f64>);

impl SpectrumVector {
    /// Sorts `values` ascending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self(values)
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

    /// The `j`-th smallest eigenvalue, 1-based.
    pub fn get(&self, j: usize) -> f64 {
        self.0[j - 1]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Eigenvalues of a dense symmetric matrix given in row-major order.
/// Only the lower triangle is read.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<SpectrumVector> {
    assert_eq!(a.len(), n * n, "matrix storage does not match order");
    let (diag, off) = householder_tridiagonalize(&mut a, n);
    tridiagonal_eigenvalues(diag, off)
}

/// Reduces the symmetric matrix in `a` to tridiagonal form, returning the
/// diagonal and the sub-diagonal. `a` is overwritten.
fn householder_tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    // Mirror the lower triangle so both triangles are valid.
    for i in 0..n {
        for j in 0..i {
            a[j * n + i] = a[i * n + j];
        }
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let m = n - start;
        diag[k] = a[k * n + k];

        // Householder vector for x = a[start.., k].
        let mut scale = 0.0_f64;
        for i in start..n {
            scale = scale.max(a[i * n + k].abs());
        }
        if scale == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let mut sigma = 0.0;
        for i in start..n {
            let x = a[i * n + k] / scale;
            v[i] = x;
            sigma += x * x;
        }
        let norm = sigma.sqrt();
        let alpha = if v[start] > 0.0 { -norm } else { norm };
        v[start] -= alpha;
        let vtv = sigma - 2.0 * alpha * (v[start] + alpha) + alpha * alpha;
        off[k] = alpha * scale;
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;

        // p = beta * A22 v
        let vs = &v[start..];
        let block = &mut a[start * n..];
        matvec_rows(block, n, start, vs, &mut p[start..], beta, m);

        // w = p - (beta/2)(p.v) v, stored in p
        let pv: f64 = p[start..].iter().zip(vs).map(|(x, y)| x * y).sum();
        let half = 0.5 * beta * pv;
        for i in start..n {
            p[i] -= half * v[i];
        }

        // A22 -= v w^T + w v^T
        rank2_update(block, n, start, vs, &p[start..], m);
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    diag[n - 1] = a[(n - 1) * n + n - 1];
    (diag, off)
}

fn matvec_rows(block: &[f64], n: usize, start: usize, v: &[f64], out: &mut [f64], beta: f64, m: usize) {
    let row_dot = |row: &[f64]| -> f64 {
        beta * row[start..].iter().zip(v).map(|(x, y)| x * y).sum::<f64>()
    };
    #[cfg(feature = "parallel")]
    if m >= PARALLEL_MIN_ORDER {
        use rayon::prelude::*;
        out.par_iter_mut()
            .zip(block.par_chunks(n))
            .for_each(|(o, row)| *o = row_dot(row));
        return;
    }
    let _ = m;
    for (o, row) in out.iter_mut().zip(block.chunks(n)) {
        *o = row_dot(row);
    }
}

fn rank2_update(block: &mut [f64], n: usize, start: usize, v: &[f64], w: &[f64], m: usize) {
    let update = |i: usize, row: &mut [f64]| {
        let (vi, wi) = (v[i], w[i]);
        for ((x, vj), wj) in row[start..].iter_mut().zip(v).zip(w) {
            *x -= vi * wj + wi * vj;
        }
    };
    #[cfg(feature = "parallel")]
    if m >= PARALLEL_MIN_ORDER {
        crate::par::for_each_row(block, n, update);
        return;
    }
    let _ = m;
    for (i, row) in block.chunks_mut(n).enumerate() {
        update(i, row);
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// sub-diagonal `off` by implicit QL.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Result<SpectrumVector> {
    let n = d.len();
    assert_eq!(off.len() + 1, n.max(1), "sub-diagonal length must be n - 1");
    let mut e = off;
    e.push(0.0);

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::ConvergenceFailure {
                    index: l,
                    iterations: MAX_QL_ITERATIONS,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(SpectrumVector::new(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> Vec<f64> {
        (1..=n)
            .map(|j| 2.0 - 2.0 * (j as f64 * PI / (n as f64 + 1.0)).cos())
            .collect()
    }

    #[test]
    fn build_examples() {
        let t = ToeplitzMatrix::build(&Symbol::rctp(1), 3);
        assert_eq!(t.column(), &[2.0, -1.0, 0.0]);
        assert_eq!(t.entry(0, 0), 2.0);
        assert_eq!(t.entry(2, 1), -1.0);
        assert_eq!(t.entry(0, 2), 0.0);
        assert_eq!(t.bandwidth(), 1);

        let k = ToeplitzMatrix::build(&Symbol::kms(0.5), 2);
        assert_eq!(k.column(), &[0.75, -0.1875]);

        let f = ToeplitzMatrix::build(&Symbol::order_dependent(3.0, 2.0, 20), 20);
        assert_eq!(f.bandwidth(), 2);
        for ell in 1..=4 {
            assert_eq!(ToeplitzMatrix::build(&Symbol::rctp(ell), 30).bandwidth(), ell as usize);
        }
    }

    #[test]
    fn small_spectra() {
        let t = ToeplitzMatrix::build(&Symbol::rctp(1), 3);
        let ev = t.eigenvalues_sorted().unwrap();
        let s2 = 2f64.sqrt();
        for (got, want) in ev.as_slice().iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }
        let one = ToeplitzMatrix::from_column(vec![0.75]);
        assert_eq!(one.eigenvalues_sorted().unwrap().as_slice(), &[0.75]);
    }

    #[test]
    fn dense_path_matches_laplacian() {
        // Force the Householder path on a tridiagonal matrix.
        for n in [2, 3, 7, 40, 300] {
            let t = ToeplitzMatrix::build(&Symbol::rctp(1), n);
            let ev = symmetric_eigenvalues(t.to_dense(), n).unwrap();
            let exact = laplacian(n);
            for (a, b) in ev.as_slice().iter().zip(&exact) {
                assert!((a - b).abs() <= 1e-12 * n as f64, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn exact_laplacian_spectrum() {
        for n in 1..=200 {
            let ev = ToeplitzMatrix::build(&Symbol::rctp(1), n)
                .eigenvalues_sorted()
                .unwrap();
            let err = ev
                .as_slice()
                .iter()
                .zip(laplacian(n))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(err <= 1e-12 * n as f64, "n={n} err={err}");
        }
    }

    // Eigenvalues of a brute-force characteristic polynomial count: the
    // number of eigenvalues below x equals the number of negative pivots of
    // the LDL^T factorization of T - xI (Sylvester's law of inertia).
    fn count_below(t: &ToeplitzMatrix, x: f64) -> usize {
        let n = t.order();
        let mut a = t.to_dense();
        for i in 0..n {
            a[i * n + i] -= x;
        }
        let mut negatives = 0;
        for k in 0..n {
            let pivot = a[k * n + k];
            if pivot < 0.0 {
                negatives += 1;
            }
            for i in k + 1..n {
                let factor = a[i * n + k] / pivot;
                for j in k + 1..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
        negatives
    }

    #[test]
    fn inertia_brackets_each_eigenvalue() {
        for sym in [Symbol::kms(0.5), Symbol::rctp(3), Symbol::order_dependent(3.0, 2.0, 25)] {
            let t = ToeplitzMatrix::build(&sym, 25);
            let ev = t.eigenvalues_sorted().unwrap();
            for (idx, &lambda) in ev.as_slice().iter().enumerate() {
                let gap = 1e-9 * sym.max_value();
                assert_eq!(count_below(&t, lambda - gap), idx, "{sym} below {idx}");
                assert_eq!(count_below(&t, lambda + gap), idx + 1, "{sym} above {idx}");
            }
        }
    }

    #[test]
    fn localization() {
        for sym in [Symbol::kms(0.5), Symbol::rctp(2), Symbol::rctp(3)] {
            for n in [64, 256] {
                let ev = ToeplitzMatrix::build(&sym, n).eigenvalues_sorted().unwrap();
                let tol = 1e-10;
                assert!(ev.as_slice().iter().all(|&x| x > sym.min_value() - tol && x < sym.max_value() + tol));
            }
        }
    }

    #[test]
    fn flip_is_similar() {
        let n = 60;
        let t = ToeplitzMatrix::build(&Symbol::kms(0.7), n);
        let a = t.to_dense();
        let mut flipped = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                flipped[(n - 1 - i) * n + (n - 1 - j)] = a[i * n + j];
            }
        }
        let ev = t.eigenvalues_sorted().unwrap();
        let ev_flip = symmetric_eigenvalues(flipped, n).unwrap();
        for (x, y) in ev.as_slice().iter().zip(ev_flip.as_slice()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn distribution_mean() {
        // (1/pi) int_0^pi f = a_0(f)
        let n = 512;
        for sym in [Symbol::kms(0.5), Symbol::rctp(2)] {
            let ev = ToeplitzMatrix::build(&sym, n).eigenvalues_sorted().unwrap();
            let mean = ev.as_slice().iter().sum::<f64>() / n as f64;
            assert!((mean - sym.fourier_coeff(0)).abs() <= 2.0 / n as f64);
        }
    }
}
