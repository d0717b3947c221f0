//! Dense real symmetric linear algebra.
//!
//! Everything the solvers and the realization builders need: a row-major
//! symmetric matrix type, a Householder/QL eigensolver, projection onto the PSD
//! cone, eigen square roots and Cholesky solves.

mod cholesky;
mod eigen;

pub use cholesky::{solve_linear, Cholesky};
pub use eigen::{sym_eig, SymEigen};

use crate::error::{Error, Result};

/// Default relative rank cut-off used by [`sqrt_psd`] callers.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Dense symmetric matrix stored row-major (both triangles kept in sync).
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Accepts a row-major buffer; rejects non-finite or visibly asymmetric input.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = data.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (data[i * n + j] - data[j * n + i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut m = Self { n, data };
        m.symmetrize();
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(n, data)
    }

    /// Trusts the caller on symmetry; used on internal buffers.
    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Adds `v` to `(i, j)` and, off the diagonal, to `(j, i)`.
    #[inline]
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &SymMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// Averages the two triangles.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (self.data[i * n + j] + self.data[j * n + i]);
                self.data[i * n + j] = v;
                self.data[j * n + i] = v;
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n.max(1))
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        sym_eig(self).map(|e| e.values[0]).unwrap_or(f64::NAN)
    }
}

/// General `n x n` row-major product `a * b`.
pub(crate) fn gemm(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        let orow = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            for (o, &bkj) in orow.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    out
}

/// Projection onto the PSD cone in Frobenius norm: negative eigenvalues clipped to zero.
pub fn psd_project(m: &SymMatrix) -> SymMatrix {
    let n = m.dim();
    let eig = match sym_eig(m) {
        Ok(e) => e,
        Err(_) => return SymMatrix::zeros(n),
    };
    let mut out = SymMatrix::zeros(n);
    let mut col = vec![0.0; n];
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for (i, c) in col.iter_mut().enumerate() {
            *c = eig.vector(i, k);
        }
        rank_one_update(&mut out, lam, &col);
    }
    out.symmetrize();
    out
}

fn rank_one_update(out: &mut SymMatrix, s: f64, v: &[f64]) {
    let n = out.dim();
    let data = out.as_mut_slice();
    for i in 0..n {
        let si = s * v[i];
        if si == 0.0 {
            continue;
        }
        let row = &mut data[i * n..(i + 1) * n];
        for (r, &vj) in row[i..].iter_mut().zip(&v[i..]) {
            *r += si * vj;
        }
    }
    for i in 0..n {
        for j in 0..i {
            data[i * n + j] = data[j * n + i];
        }
    }
}

/// Low-rank square root `F` (`rank x n`, row-major) with `FᵀF = m`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub rank: usize,
    pub cols: usize,
    /// Row-major `rank x cols`.
    pub data: Vec<f64>,
}

impl Factor {
    /// Column `j` as a vector in `R^rank`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rank).map(|r| self.data[r * self.cols + j]).collect()
    }

    /// `FᵀF`.
    pub fn gram(&self) -> SymMatrix {
        SymMatrix::from_fn(self.cols, |i, j| {
            (0..self.rank)
                .map(|r| self.data[r * self.cols + i] * self.data[r * self.cols + j])
                .sum()
        })
    }
}

/// Square-root factor of a PSD matrix keeping eigenvalues above `rank_tol * λ_max`.
pub fn sqrt_psd(m: &SymMatrix, rank_tol: f64) -> Result<Factor> {
    let n = m.dim();
    let eig = sym_eig(m)?;
    let max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -1e-6 * max.max(f64::MIN_POSITIVE) && min < -1e-12 {
        return Err(Error::Indefinite {
            min_eigenvalue: min,
        });
    }
    let cut = rank_tol * max;
    let keep: Vec<usize> = (0..n)
        .rev()
        .filter(|&k| eig.values[k] > cut && eig.values[k] > 0.0)
        .collect();
    let rank = keep.len();
    let mut data = vec![0.0; rank * n];
    for (r, &k) in keep.iter().enumerate() {
        let s = eig.values[k].sqrt();
        for j in 0..n {
            data[r * n + j] = s * eig.vector(j, k);
        }
    }
    Ok(Factor {
        rank,
        cols: n,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psd_project_clips_negative_part() {
        let m = SymMatrix::from_diag(&[1.0, -1.0]);
        let p = psd_project(&m);
        assert!((p.get(0, 0) - 1.0).abs() < 1e-14);
        assert!(p.get(1, 1).abs() < 1e-14);
        assert!(p.get(0, 1).abs() < 1e-14);
    }

    #[test]
    fn psd_project_fixes_psd_input() {
        let m = SymMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ])
        .unwrap();
        let p = psd_project(&m);
        assert!(p.sub(&m).max_abs() < 1e-12);
    }

    #[test]
    fn psd_project_kills_negative_rank_one() {
        let v = [0.6, -0.8, 0.0];
        let m = SymMatrix::from_fn(3, |i, j| -v[i] * v[j]);
        assert!(psd_project(&m).max_abs() < 1e-12);
    }

    #[test]
    fn sqrt_of_identity_is_orthonormal() {
        let f = sqrt_psd(&SymMatrix::identity(3), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.rank, 3);
        assert!(f.gram().sub(&SymMatrix::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn sqrt_of_all_ones_is_rank_one() {
        let m = SymMatrix::from_fn(4, |_, _| 1.0);
        let f = sqrt_psd(&m, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(f.rank, 1);
        let c0 = f.column(0);
        assert!((c0[0].abs() - 1.0).abs() < 1e-12);
        for j in 1..4 {
            assert!((f.column(j)[0] - c0[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = SymMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&m, 1e-8), Err(Error::Indefinite { .. })));
    }

    #[test]
    fn from_rows_rejects_asymmetric() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, f64::NAN], vec![f64::NAN, 1.0]]).is_err());
    }
}
