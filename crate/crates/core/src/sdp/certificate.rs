// Rigorous upper bounds from approximate dual slacks.
//
// For any symmetric Y with ⟨Y, F_k⟩ = 0 on every free class indicator F_k, and
// D = Y − C, every feasible X satisfies
//
//   ⟨C, X⟩ = ⟨Y, X⟩ − ⟨D, X⟩ ≤ Σ_fixed Y·value + max(0, −λ_min(D)) · tr X.
//
// A solver's slack only satisfies the class conditions approximately, so Y is
// first projected onto that subspace (subtract each class mean).

use serde::Serialize;

use super::{AsInstance, SdpInstance, SdpSolution};
use crate::error::{Error, Result};
use crate::numerics::SymMatrix;

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Certified upper bound on the optimum.
    pub bound: f64,
    /// `λ_min` of the repaired dual slack.
    pub min_slack_eigenvalue: f64,
    /// Amount added to the dual value to absorb a negative slack eigenvalue.
    pub shift: f64,
    pub primal: f64,
    /// `bound − primal`.
    pub gap: f64,
    /// Whether the bound is consistent with the primal value (weak duality within tolerance).
    pub holds: bool,
}

pub(crate) struct SlackCertificate {
    pub bound: f64,
    pub multipliers: Vec<f64>,
    pub min_eigenvalue: f64,
    pub shift: f64,
}

fn weight(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        2.0
    }
}

pub(crate) fn certify_with_slack(inst: &SdpInstance, slack: &SymMatrix) -> SlackCertificate {
    let mut y = slack.clone();
    y.axpy(1.0, &inst.objective);
    for class in &inst.free_classes {
        let (sum, w) = class
            .iter()
            .fold((0.0, 0.0), |(s, w), &(i, j)| (s + weight(i, j) * y.get(i, j), w + weight(i, j)));
        let mean = sum / w;
        for &(i, j) in class {
            let v = y.get(i, j) - mean;
            y.set(i, j, v);
        }
    }
    certify_y(inst, &y)
}

fn certify_y(inst: &SdpInstance, y: &SymMatrix) -> SlackCertificate {
    let d = y.sub(&inst.objective);
    let min_eigenvalue = d.min_eigenvalue();
    let multipliers: Vec<f64> = inst.fixed.iter().map(|&(i, j, _)| weight(i, j) * y.get(i, j)).collect();
    let base: f64 = multipliers.iter().zip(&inst.fixed).map(|(m, f)| m * f.2).sum();
    let shift = (-min_eigenvalue).max(0.0) * inst.trace_bound;
    SlackCertificate {
        bound: base + inst.offset + shift,
        multipliers,
        min_eigenvalue,
        shift,
    }
}

/// Rebuilds the dual slack carried by `s` and returns a certified upper bound.
///
/// Uses `s.dual_slack` when present; otherwise places `s.dual_variables` on the
/// fixed entries (the form of the correlation-matrix dual, `diag(λ) − Λ`).
pub fn verify_dual_certificate<P: AsInstance + ?Sized>(p: &P, s: &SdpSolution, tol: f64) -> Result<Certificate> {
    let inst = p.instance();
    let cert = match &s.dual_slack {
        Some(slack) => {
            if slack.dim() != inst.dim {
                return Err(Error::DimensionMismatch {
                    expected: inst.dim,
                    found: slack.dim(),
                });
            }
            certify_with_slack(&inst, slack)
        }
        None => {
            if s.dual_variables.len() != inst.fixed.len() {
                return Err(Error::MissingDual);
            }
            let mut y = SymMatrix::zeros(inst.dim);
            for (&(i, j, _), &m) in inst.fixed.iter().zip(&s.dual_variables) {
                y.set(i, j, m / weight(i, j));
            }
            certify_y(&inst, &y)
        }
    };
    let gap = cert.bound - s.primal_value;
    Ok(Certificate {
        bound: cert.bound,
        min_slack_eigenvalue: cert.min_eigenvalue,
        shift: cert.shift,
        primal: s.primal_value,
        gap,
        holds: gap >= -tol * s.primal_value.abs().max(1.0),
    })
}
