// Two-block ADMM on  min −⟨C, X⟩ + 1_affine(X) + 1_psd(Z)  s.t.  X = Z.
//
//   X ← Π_affine(Z − U + C/ρ)
//   Z ← Π_psd(X + U)
//   U ← U + X − Z
//
// The affine projection is per-class averaging; U stays negative semidefinite,
// so −ρU is an exact PSD dual slack at every iterate.

use super::{certificate, Backend, SdpInstance, SdpSolution};
use crate::error::Result;
use crate::numerics::{sym_eig, SymMatrix};

#[derive(Clone, Debug)]
pub struct AdmmOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub rho: f64,
    /// Iterations between penalty rebalancing.
    pub adapt_every: usize,
}

impl Default for AdmmOptions {
    fn default() -> Self {
        Self {
            tol: super::DEFAULT_ADMM_TOL,
            max_iter: super::DEFAULT_ADMM_MAX_ITER,
            rho: 1.0,
            adapt_every: 50,
        }
    }
}

/// Splits `V = V₊ − V₋` into PSD parts.
fn split_psd(v: &SymMatrix) -> (SymMatrix, SymMatrix) {
    match sym_eig(v) {
        Ok(e) => {
            let pos = e.reconstruct_with(|l| l.max(0.0));
            let neg = e.reconstruct_with(|l| (-l).max(0.0));
            (pos, neg)
        }
        Err(_) => (SymMatrix::zeros(v.dim()), SymMatrix::zeros(v.dim())),
    }
}

pub fn solve_admm(inst: &SdpInstance, opts: &AdmmOptions) -> Result<SdpSolution> {
    let n = inst.dim;
    let c = &inst.objective;
    let mut rho = opts.rho;
    let mut z = inst.project_affine(&SymMatrix::identity(n));
    let mut u = SymMatrix::zeros(n);
    let mut x = z.clone();
    let mut iterations = 0;
    let mut converged = false;
    let (mut r_norm, mut s_norm) = (f64::INFINITY, f64::INFINITY);

    for it in 1..=opts.max_iter {
        iterations = it;
        let mut v = z.sub(&u);
        v.axpy(1.0 / rho, c);
        x = inst.project_affine(&v);

        let mut w = x.clone();
        w.axpy(1.0, &u);
        let (pos, neg) = split_psd(&w);
        let z_prev = std::mem::replace(&mut z, pos);
        // U + X − Z = W − Π(W) = −Π(−W)
        u = neg;
        u.scale(-1.0);

        r_norm = x.sub(&z).frobenius_norm();
        s_norm = rho * z.sub(&z_prev).frobenius_norm();
        let scale_p = x.frobenius_norm().max(z.frobenius_norm()).max(1.0);
        let scale_d = (rho * u.frobenius_norm()).max(1.0);
        if r_norm <= opts.tol * scale_p && s_norm <= opts.tol * scale_d {
            converged = true;
            break;
        }
        if opts.adapt_every > 0 && it % opts.adapt_every == 0 {
            let rel_r = r_norm / scale_p;
            let rel_s = s_norm / scale_d;
            if rel_r > 10.0 * rel_s {
                rho *= 2.0;
                u.scale(0.5);
            } else if rel_s > 10.0 * rel_r {
                rho *= 0.5;
                u.scale(2.0);
            }
        }
    }

    let mut slack = u.clone();
    slack.scale(-rho);
    let cert = certificate::certify_with_slack(inst, &slack);
    Ok(SdpSolution {
        primal_value: inst.value(&x),
        dual_value: cert.bound,
        dual_variables: cert.multipliers,
        dual_slack: Some(slack),
        matrix: x,
        primal_residual: r_norm,
        dual_residual: s_norm,
        iterations,
        converged,
        backend: Backend::Admm,
        tolerance: opts.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_correlation_instance() {
        let mut c = SymMatrix::zeros(2);
        c.set(0, 1, 1.0);
        let inst = SdpInstance {
            dim: 2,
            free_classes: vec![vec![(0, 1)]],
            fixed: vec![(0, 0, 1.0), (1, 1, 1.0)],
            objective: c,
            offset: 0.0,
            trace_bound: 2.0,
        };
        let sol = solve_admm(&inst, &AdmmOptions::default()).unwrap();
        assert!(sol.converged);
        assert!((sol.primal_value - 2.0).abs() < 1e-4, "{}", sol.primal_value);
        assert!(sol.dual_value >= sol.primal_value - 1e-6);
    }
}
