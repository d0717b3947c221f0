// Observables A_v = Σ v_k Γ_k from anticommuting generators; {A_u, A_v} = 2(u, v)·1,
// so every unit vector gives a ±1 observable and sequential correlators reduce
// to inner products, whatever the state.

use std::f64::consts::PI;

use super::complex::CMatrix;
use super::{QuantumRealization, RealizationMetadata};
use crate::error::{Error, Result};
use crate::numerics::{sqrt_psd, SymMatrix};

pub const MAX_CLIFFORD_DIM: usize = 12;

/// Unit vectors `x_i ∈ ℝ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramVectors {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl GramVectors {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map(Vec::len).unwrap_or(0);
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!("vector norm {norm} is not 1")));
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn gram(&self) -> SymMatrix {
        SymMatrix::from_fn(self.vectors.len(), |i, j| {
            self.vectors[i].iter().zip(&self.vectors[j]).map(|(a, b)| a * b).sum()
        })
    }
}

/// Vectors with `(x_i, x_j) = X_ij`, in dimension equal to the numerical rank of `X`.
pub fn gram_vectors(x: &SymMatrix, rank_tol: f64) -> Result<GramVectors> {
    if let Some((i, v)) = x.diag().into_iter().enumerate().find(|(_, v)| (v - 1.0).abs() > 1e-6) {
        return Err(Error::InvalidArgument(format!("diagonal entry {i} is {v}, expected 1")));
    }
    let f = sqrt_psd(x, rank_tol)?;
    let vectors = (0..x.dim())
        .map(|i| {
            let mut v = f.column(i);
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            v
        })
        .collect();
    Ok(GramVectors { dim: f.rank, vectors })
}

/// `x_i = (cos iθ, sin iθ)` with `θ = (N+1)π/N`; consecutive inner products are `−cos(π/N)`.
pub fn planar_cycle_vectors(n: usize) -> Result<GramVectors> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("N-cycle needs N >= 3 (got {n})")));
    }
    let theta = (n as f64 + 1.0) * PI / n as f64;
    GramVectors::new(
        (0..n)
            .map(|i| {
                let a = i as f64 * theta;
                vec![a.cos(), a.sin()]
            })
            .collect(),
    )
}

fn pauli() -> [CMatrix; 4] {
    let i2 = CMatrix::identity(2);
    let x = CMatrix::from_parts(2, vec![0.0, 1.0, 1.0, 0.0], vec![0.0; 4]).expect("finite");
    let y = CMatrix::from_parts(2, vec![0.0; 4], vec![0.0, -1.0, 1.0, 0.0]).expect("finite");
    let z = CMatrix::from_parts(2, vec![1.0, 0.0, 0.0, -1.0], vec![0.0; 4]).expect("finite");
    [i2, x, y, z]
}

/// `d` Hermitian, pairwise anticommuting involutions of size `2^⌈d/2⌉`:
/// `Γ_{2k} = Z^{⊗k} ⊗ X ⊗ 1`, `Γ_{2k+1} = Z^{⊗k} ⊗ Y ⊗ 1`.
pub fn clifford_generators(d: usize) -> Result<Vec<CMatrix>> {
    if !(1..=MAX_CLIFFORD_DIM).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "Clifford dimension {d} outside 1..={MAX_CLIFFORD_DIM}"
        )));
    }
    let m = d.div_ceil(2);
    let [id, x, y, z] = pauli();
    let tensor = |factors: Vec<&CMatrix>| {
        factors
            .into_iter()
            .fold(CMatrix::identity(1), |acc, f| acc.kron(f))
    };
    Ok((0..d)
        .map(|g| {
            let k = g / 2;
            let middle = if g % 2 == 0 { &x } else { &y };
            let mut factors = vec![&z; k];
            factors.push(middle);
            factors.extend(std::iter::repeat_n(&id, m - k - 1));
            tensor(factors)
        })
        .collect())
}

/// `A_i = Σ_k x_i[k] Γ_k` with `Π_0 = (1 + A_i)/2`, `Π_1 = (1 − A_i)/2`, in the
/// maximally mixed state.
pub fn observables_from_vectors(v: &GramVectors) -> Result<QuantumRealization> {
    let gens = clifford_generators(v.dim.max(1))?;
    let dimension = gens[0].n;
    let id = CMatrix::identity(dimension);
    let projectors = v
        .vectors
        .iter()
        .map(|x| {
            let mut a = CMatrix::zeros(dimension);
            for (c, g) in x.iter().zip(&gens) {
                a.add_scaled(*c, g);
            }
            let mut p0 = id.clone();
            p0.add_scaled(1.0, &a);
            let mut p1 = id.clone();
            p1.add_scaled(-1.0, &a);
            vec![p0.scaled(0.5), p1.scaled(0.5)]
        })
        .collect();
    Ok(QuantumRealization {
        dimension,
        state: id.scaled(1.0 / dimension as f64),
        projectors,
        metadata: None::<RealizationMetadata>,
    })
}
