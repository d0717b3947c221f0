// Reconstruction of projectors and a state from a moment matrix.
//
// With M = FᵀF and f_u the column of word u, M_uv = ⟨f_u, f_v⟩ plays the role of
// ⟨ψ| W_u W_v† |ψ⟩, i.e. f_u ≅ W_u†ψ. The operator acting first on ψ is the last
// letter of u, so f_u lies in the range of that letter's projector, and the
// projector of a kept outcome is the orthogonal projector onto the span of all
// f_u ending in it. Dropped outcomes are filled in by completeness.

use serde::Serialize;

use super::complex::CMatrix;
use super::QuantumRealization;
use crate::error::{Error, Result};
use crate::moment::MomentProblem;
use crate::numerics::{sqrt_psd, sym_eig, SymMatrix, DEFAULT_RANK_TOL};
use crate::opalg::Letter;
use crate::sdp::SdpSolution;

/// Class spread above which a matrix is rejected rather than repaired.
pub const MAX_CLASS_RESIDUAL: f64 = 1e-4;
/// Relative residual norm below which a vector counts as already spanned.
const SPAN_TOL: f64 = 1e-6;
const REPAIR_ITER: usize = 2000;
const REPAIR_TOL: f64 = 1e-14;

#[derive(Clone, Debug, Serialize)]
pub struct GnsReport {
    pub rank: usize,
    /// Class spread of the input matrix.
    pub class_residual: f64,
    /// Largest entry change made while restoring exact feasibility.
    pub perturbation: f64,
}

/// Orthonormalizes `candidates` against `basis` (and each other), returning the
/// new directions only.
fn extend_basis(basis: &[Vec<f64>], candidates: &[Vec<f64>], scale: f64) -> Vec<Vec<f64>> {
    let mut fresh: Vec<Vec<f64>> = Vec::new();
    for c in candidates {
        let mut v = c.clone();
        for _ in 0..2 {
            for q in basis.iter().chain(fresh.iter()) {
                let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > SPAN_TOL * scale {
            v.iter_mut().for_each(|a| *a /= norm);
            fresh.push(v);
        }
    }
    fresh
}

fn projector(basis: &[Vec<f64>], d: usize) -> SymMatrix {
    SymMatrix::from_fn(d, |i, j| basis.iter().map(|q| q[i] * q[j]).sum())
}

/// Alternates class averaging with spectral truncation (eigenvalues below the
/// rank threshold set to zero) until the matrix satisfies the moment relations
/// exactly and its discarded spectrum is at rounding level.
fn repair(p: &MomentProblem, m: &SymMatrix) -> Result<SymMatrix> {
    let mut m = p.symmetrize_classes(m);
    for _ in 0..REPAIR_ITER {
        let e = sym_eig(&m)?;
        let max = e.values.last().copied().unwrap_or(0.0).max(1.0);
        let cut = DEFAULT_RANK_TOL * max;
        let settled = e
            .values
            .iter()
            .all(|&l| l >= cut || l.abs() <= REPAIR_TOL * max);
        if settled {
            break;
        }
        m = p.symmetrize_classes(&e.reconstruct_with(|l| if l < cut { 0.0 } else { l }));
    }
    Ok(m)
}

pub fn gns_from_moments(s: &SdpSolution, p: &MomentProblem) -> Result<QuantumRealization> {
    gns_reconstruct(s, p).map(|(r, _)| r)
}

pub fn gns_reconstruct(s: &SdpSolution, p: &MomentProblem) -> Result<(QuantumRealization, GnsReport)> {
    let n = p.dim();
    if s.matrix.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.matrix.dim(),
        });
    }
    let class_residual = p.class_residual(&s.matrix);
    if class_residual.is_nan() || class_residual > MAX_CLASS_RESIDUAL {
        return Err(Error::Infeasible {
            residual: class_residual,
        });
    }
    let m = repair(p, &s.matrix)?;
    let perturbation = m.sub(&s.matrix).max_abs();
    let f = sqrt_psd(&m, DEFAULT_RANK_TOL)?;
    let d = f.rank;
    if d == 0 {
        return Err(Error::InvalidRealization("moment matrix has rank zero".into()));
    }
    let columns: Vec<Vec<f64>> = (0..n).map(|u| f.column(u)).collect();
    let scale = columns
        .iter()
        .map(|c| c.iter().map(|a| a * a).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let words = p.index.words();
    let sc = &p.scenario;
    let id = SymMatrix::identity(d);

    let mut projectors = Vec::with_capacity(sc.num_settings());
    for (setting, &count) in sc.outcomes.iter().enumerate() {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut row = Vec::with_capacity(count);
        let mut dropped = id.clone();
        for outcome in 0..count - 1 {
            let letter = Letter { setting, outcome };
            let candidates: Vec<Vec<f64>> = words
                .iter()
                .zip(&columns)
                .filter(|(w, _)| w.last() == Some(letter))
                .map(|(_, c)| c.clone())
                .collect();
            let fresh = extend_basis(&basis, &candidates, scale);
            let proj = projector(&fresh, d);
            dropped.axpy(-1.0, &proj);
            row.push(CMatrix::from_real(&proj));
            basis.extend(fresh);
        }
        row.push(CMatrix::from_real(&dropped));
        projectors.push(row);
    }

    let psi = &columns[0];
    let state = CMatrix::outer(psi, &vec![0.0; d]);
    let norm = state.trace_re();
    Ok((
        QuantumRealization {
            dimension: d,
            state: state.scaled(1.0 / norm),
            projectors,
            metadata: None,
        },
        GnsReport {
            rank: d,
            class_residual,
            perturbation,
        },
    ))
}
