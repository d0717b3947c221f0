use super::SymMatrix;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, row-major.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        Self::factor_slice(a.dim(), a.as_slice())
    }

    pub(crate) fn factor_slice(n: usize, a: &[f64]) -> Result<Self> {
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = a[j * n + j];
            for k in 0..j {
                diag -= l[j * n + k] * l[j * n + k];
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite);
            }
            let ljj = diag.sqrt();
            l[j * n + j] = ljj;
            for i in (j + 1)..n {
                let (ri, rj) = (&l[i * n..i * n + j], &l[j * n..j * n + j]);
                let s: f64 = ri.iter().zip(rj).map(|(x, y)| x * y).sum();
                l[i * n + j] = (a[i * n + j] - s) / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `L y = b` in place.
    pub fn forward(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let s: f64 = (0..i).map(|k| self.l[i * n + k] * b[k]).sum();
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward(&self, b: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|k| self.l[k * n + i] * b[k]).sum();
            b[i] = (b[i] - s) / self.l[i * n + i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward(&mut x);
        self.backward(&mut x);
        x
    }

    pub fn inverse(&self) -> SymMatrix {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = 0.0);
            col[j] = 1.0;
            self.forward(&mut col);
            self.backward(&mut col);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        let mut m = SymMatrix::from_raw(n, inv);
        m.symmetrize();
        m
    }

    /// `L⁻¹ M L⁻ᵀ` for symmetric `M`.
    pub fn congruence_inverse(&self, m: &SymMatrix) -> SymMatrix {
        let n = self.n;
        // Columns of M solved against L, then rows.
        let mut t = m.as_slice().to_vec();
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = t[i * n + j];
            }
            self.forward(&mut col);
            for i in 0..n {
                t[i * n + j] = col[i];
            }
        }
        for i in 0..n {
            self.forward(&mut t[i * n..(i + 1) * n]);
        }
        let mut out = SymMatrix::from_raw(n, t);
        out.symmetrize();
        out
    }
}

/// Solves `a x = b` for positive definite `a`.
pub fn solve_linear(a: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.len(),
        });
    }
    Ok(Cholesky::factor(a)?.solve(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let b = [1.0, -2.0, 3.5];
        assert_eq!(solve_linear(&SymMatrix::identity(3), &b).unwrap(), b.to_vec());
        let x = solve_linear(&SymMatrix::from_diag(&[2.0, 4.0]), &[2.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_indefinite_and_singular() {
        assert!(solve_linear(&SymMatrix::from_diag(&[1.0, -1.0]), &[1.0, 1.0]).is_err());
        assert!(solve_linear(&SymMatrix::from_diag(&[1.0, 0.0]), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn inverse_and_congruence() {
        let a = SymMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let c = Cholesky::factor(&a).unwrap();
        let inv = c.inverse();
        let prod = super::super::gemm(2, a.as_slice(), inv.as_slice());
        assert!((prod[0] - 1.0).abs() < 1e-14 && prod[1].abs() < 1e-14);
        // L⁻¹ A L⁻ᵀ = I
        let id = c.congruence_inverse(&a);
        assert!(id.sub(&SymMatrix::identity(2)).max_abs() < 1e-14);
    }
}
