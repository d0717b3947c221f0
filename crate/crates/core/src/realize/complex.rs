// Square complex matrices stored as a pair of row-major real matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            re: vec![0.0; n * n],
            im: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.re[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_parts(n: usize, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != n * n || im.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: re.len().max(im.len()),
            });
        }
        if re.iter().chain(&im).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, re, im })
    }

    pub fn from_real(m: &SymMatrix) -> Self {
        let n = m.dim();
        Self {
            n,
            re: m.as_slice().to_vec(),
            im: vec![0.0; n * n],
        }
    }

    /// `|ψ⟩⟨ψ|` for `ψ = re + i·im`.
    pub fn outer(re: &[f64], im: &[f64]) -> Self {
        let n = re.len();
        let mut m = Self::zeros(n);
        for a in 0..n {
            for b in 0..n {
                // (x_a + i y_a)(x_b − i y_b)
                m.re[a * n + b] = re[a] * re[b] + im[a] * im[b];
                m.im[a * n + b] = im[a] * re[b] - re[a] * im[b];
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[i * self.n + j], self.im[i * self.n + j])
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let (ar, ai) = (self.re[i * n + k], self.im[i * n + k]);
                if ar == 0.0 && ai == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (br, bi) = (other.re[k * n + j], other.im[k * n + j]);
                    out.re[i * n + j] += ar * br - ai * bi;
                    out.im[i * n + j] += ar * bi + ai * br;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.re[j * n + i] = self.re[i * n + j];
                out.im[j * n + i] = -self.im[i * n + j];
            }
        }
        out
    }

    pub fn add_scaled(&mut self, s: f64, other: &CMatrix) {
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            *a += s * b;
        }
        for (a, b) in self.im.iter_mut().zip(&other.im) {
            *a += s * b;
        }
    }

    pub fn scaled(&self, s: f64) -> CMatrix {
        let mut out = self.clone();
        out.re.iter_mut().chain(out.im.iter_mut()).for_each(|v| *v *= s);
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    /// Real part of the trace.
    pub fn trace_re(&self) -> f64 {
        (0..self.n).map(|i| self.re[i * self.n + i]).sum()
    }

    pub fn trace_im(&self) -> f64 {
        (0..self.n).map(|i| self.im[i * self.n + i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.re.iter().chain(&self.im).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `‖M − M†‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// Real symmetric `2n × 2n` embedding `[[A, −B], [B, A]]` of `(M + M†)/2`; its
    /// spectrum is that of the Hermitian part, each eigenvalue doubled.
    pub fn real_embedding(&self) -> SymMatrix {
        let n = self.n;
        let h = {
            let mut h = self.clone();
            h.add_scaled(1.0, &self.adjoint());
            h.scaled(0.5)
        };
        SymMatrix::from_fn(2 * n, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            let (a, b) = h.get(ri, rj);
            match (bi, bj) {
                (0, 0) | (1, 1) => a,
                (0, 1) => -b,
                _ => b,
            }
        })
    }

    /// `A ⊗ B`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (p, q) = (self.n, other.n);
        let n = p * q;
        let mut out = CMatrix::zeros(n);
        for a in 0..p {
            for b in 0..p {
                let (xr, xi) = self.get(a, b);
                if xr == 0.0 && xi == 0.0 {
                    continue;
                }
                for c in 0..q {
                    for d in 0..q {
                        let (yr, yi) = other.get(c, d);
                        let idx = (a * q + c) * n + (b * q + d);
                        out.re[idx] = xr * yr - xi * yi;
                        out.im[idx] = xr * yi + xi * yr;
                    }
                }
            }
        }
        out
    }
}
