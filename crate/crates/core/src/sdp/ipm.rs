// Infeasible primal-dual path following (HKM direction) with a Mehrotra
// predictor-corrector, on the standard form
//
//   minimize ⟨C', X⟩  s.t. ⟨A_k, X⟩ = b_k,  X ⪰ 0
//   maximize b·y      s.t. S = C' − Σ y_k A_k ⪰ 0
//
// with C' = −C. Equality rows are the fixed entries plus, for each free class,
// "member − first member = 0".

use super::{Backend, SdpInstance, SdpSolution};
use crate::error::{Error, Result};
use crate::numerics::{gemm, sym_eig, Cholesky, SymMatrix};

const REFINE_STEPS: usize = 2;
/// Iterations without a 10% decrease of μ before the run is declared stalled.
const STALL_LIMIT: usize = 5;
const STALL_RATIO: f64 = 0.9;

#[derive(Clone, Debug)]
pub struct IpmOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 100,
            step_fraction: 0.98,
        }
    }
}

/// Sparse symmetric constraint matrix listed over the full matrix.
struct Constraint {
    entries: Vec<(usize, usize, f64)>,
}

impl Constraint {
    fn unit(i: usize, j: usize, scale: f64) -> Vec<(usize, usize, f64)> {
        if i == j {
            vec![(i, i, scale)]
        } else {
            vec![(i, j, 0.5 * scale), (j, i, 0.5 * scale)]
        }
    }

    fn dot(&self, m: &[f64], n: usize) -> f64 {
        self.entries.iter().map(|&(i, j, v)| v * m[i * n + j]).sum()
    }
}

fn constraints(inst: &SdpInstance) -> (Vec<Constraint>, Vec<f64>) {
    let mut a = Vec::with_capacity(inst.constraint_count());
    let mut b = Vec::with_capacity(inst.constraint_count());
    for &(i, j, v) in &inst.fixed {
        a.push(Constraint {
            entries: Constraint::unit(i, j, 1.0),
        });
        b.push(v);
    }
    for class in &inst.free_classes {
        let (i0, j0) = class[0];
        for &(i, j) in &class[1..] {
            let mut e = Constraint::unit(i, j, 1.0);
            e.extend(Constraint::unit(i0, j0, -1.0));
            a.push(Constraint { entries: e });
            b.push(0.0);
        }
    }
    (a, b)
}

fn adjoint(a: &[Constraint], y: &[f64], n: usize) -> SymMatrix {
    let mut out = SymMatrix::zeros(n);
    let data = out.as_mut_slice();
    for (c, &yk) in a.iter().zip(y) {
        for &(i, j, v) in &c.entries {
            data[i * n + j] += yk * v;
        }
    }
    out
}

/// Largest `α ≤ 1/γ` with `X + α dX ⪰ 0`, given `X = L Lᵀ`.
fn max_step(chol: &Cholesky, d: &SymMatrix) -> f64 {
    let m = chol.congruence_inverse(d);
    match sym_eig(&m) {
        Ok(e) => {
            let lo = e.values[0];
            if lo >= 0.0 {
                f64::INFINITY
            } else {
                -1.0 / lo
            }
        }
        Err(_) => 0.0,
    }
}

struct Direction {
    dx: SymMatrix,
    dy: Vec<f64>,
    ds: SymMatrix,
}

pub fn solve_ipm(inst: &SdpInstance, opts: &IpmOptions) -> Result<SdpSolution> {
    let n = inst.dim;
    let (a, b) = constraints(inst);
    let m = a.len();
    let mut c = inst.objective.clone();
    c.scale(-1.0);

    // Starting point scaled to the data.
    let norm_c = c.frobenius_norm();
    let sqrt_n = (n as f64).sqrt();
    let xi = a
        .iter()
        .zip(&b)
        .map(|(ak, &bk)| {
            let na: f64 = ak.entries.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt();
            n as f64 * (1.0 + bk.abs()) / (1.0 + na)
        })
        .fold(10.0f64.max(sqrt_n), f64::max);
    let eta = (1.0 + norm_c).max(10.0f64.max(sqrt_n));
    let mut x = SymMatrix::identity(n);
    x.scale(xi);
    let mut s = SymMatrix::identity(n);
    s.scale(eta);
    let mut y = vec![0.0; m];

    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut iterations = 0;
    let mut converged = false;
    let mut best_mu = f64::INFINITY;
    let mut stalled = 0;
    let (mut pinf, mut dinf) = (f64::INFINITY, f64::INFINITY);

    for it in 0..opts.max_iter {
        iterations = it;
        let rp: Vec<f64> = a.iter().zip(&b).map(|(ak, &bk)| bk - ak.dot(x.as_slice(), n)).collect();
        let mut rd = c.sub(&adjoint(&a, &y, n));
        rd.axpy(-1.0, &s);
        let pobj = c.dot(&x);
        let dobj: f64 = b.iter().zip(&y).map(|(p, q)| p * q).sum();
        pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + norm_b);
        dinf = rd.frobenius_norm() / (1.0 + norm_c);
        let gap = (pobj - dobj).abs();
        if gap <= opts.tol * pobj.abs().max(1.0) && pinf <= opts.tol && dinf <= opts.tol {
            converged = true;
            break;
        }
        let mu = x.dot(&s) / n as f64;

        if mu >= STALL_RATIO * best_mu {
            stalled += 1;
            if stalled >= STALL_LIMIT {
                break;
            }
        } else {
            stalled = 0;
            best_mu = mu;
        }
        // Iterates that lost definiteness to rounding end the run; the last one is returned.
        let (Ok(s_chol), Ok(x_chol)) = (Cholesky::factor(&s), Cholesky::factor(&x)) else {
            break;
        };
        let s_inv = s_chol.inverse();

        let h = schur_complement(&a, &x, &s_inv, n);
        let schur = Schur {
            chol: factor_regularized(&h, m)?,
            h,
        };

        let xs = gemm(n, x.as_slice(), s.as_slice());
        // Predictor.
        let mut rc: Vec<f64> = xs.iter().map(|v| -v).collect();
        let aff = direction(&a, &rp, &rd, &rc, &x, &s_inv, &schur, n);
        let ap = (opts.step_fraction * max_step(&x_chol, &aff.dx)).min(1.0);
        let ad = (opts.step_fraction * max_step(&s_chol, &aff.ds)).min(1.0);
        let mut xa = x.clone();
        xa.axpy(ap, &aff.dx);
        let mut sa = s.clone();
        sa.axpy(ad, &aff.ds);
        let mu_aff = xa.dot(&sa) / n as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);

        // Corrector.
        let dxds = gemm(n, aff.dx.as_slice(), aff.ds.as_slice());
        for i in 0..n * n {
            rc[i] -= dxds[i];
        }
        for i in 0..n {
            rc[i * n + i] += sigma * mu;
        }
        let dir = direction(&a, &rp, &rd, &rc, &x, &s_inv, &schur, n);
        let ap = (opts.step_fraction * max_step(&x_chol, &dir.dx)).min(1.0);
        let ad = (opts.step_fraction * max_step(&s_chol, &dir.ds)).min(1.0);
        x.axpy(ap, &dir.dx);
        s.axpy(ad, &dir.ds);
        for (yk, dyk) in y.iter_mut().zip(&dir.dy) {
            *yk += ad * dyk;
        }
        x.symmetrize();
        s.symmetrize();
        iterations = it + 1;
    }

    // Y = −Σ y_k A_k; its fixed-entry values are the reported multipliers.
    let mut yfix = adjoint(&a, &y, n);
    yfix.scale(-1.0);
    yfix.symmetrize();
    let dual_variables = inst
        .fixed
        .iter()
        .map(|&(i, j, _)| if i == j { yfix.get(i, j) } else { 2.0 * yfix.get(i, j) })
        .collect();
    let dobj: f64 = b.iter().zip(&y).map(|(p, q)| p * q).sum();
    Ok(SdpSolution {
        primal_value: inst.value(&x),
        dual_value: -dobj + inst.offset,
        matrix: x,
        dual_variables,
        dual_slack: Some(s),
        primal_residual: pinf,
        dual_residual: dinf,
        iterations,
        converged,
        backend: Backend::Ipm,
        tolerance: opts.tol,
    })
}

/// `H_kl = ⟨A_k, X A_l S⁻¹⟩`.
fn schur_complement(a: &[Constraint], x: &SymMatrix, s_inv: &SymMatrix, n: usize) -> Vec<f64> {
    let m = a.len();
    let xd = x.as_slice();
    let sd = s_inv.as_slice();
    let mut h = vec![0.0; m * m];
    for k in 0..m {
        for l in k..m {
            let mut v = 0.0;
            for &(p, q, ak) in &a[k].entries {
                for &(r, s, al) in &a[l].entries {
                    v += ak * al * xd[p * n + r] * sd[s * n + q];
                }
            }
            h[k * m + l] = v;
            h[l * m + k] = v;
        }
    }
    h
}

/// Schur matrix and its (possibly regularized) factor; solves are refined
/// against the unregularized matrix.
struct Schur {
    h: Vec<f64>,
    chol: Cholesky,
}

impl Schur {
    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let m = rhs.len();
        let mut x = self.chol.solve(rhs);
        for _ in 0..REFINE_STEPS {
            let r: Vec<f64> = (0..m)
                .map(|i| rhs[i] - self.h[i * m..(i + 1) * m].iter().zip(&x).map(|(a, b)| a * b).sum::<f64>())
                .collect();
            let dx = self.chol.solve(&r);
            x.iter_mut().zip(&dx).for_each(|(a, b)| *a += b);
        }
        x
    }
}

fn factor_regularized(h: &[f64], m: usize) -> Result<Cholesky> {
    if let Ok(c) = Cholesky::factor_slice(m, h) {
        return Ok(c);
    }
    let scale = (0..m).map(|i| h[i * m + i].abs()).fold(0.0, f64::max).max(1.0);
    let mut reg = h.to_vec();
    let mut delta = 1e-14 * scale;
    for _ in 0..8 {
        for i in 0..m {
            reg[i * m + i] = h[i * m + i] + delta;
        }
        if let Ok(c) = Cholesky::factor_slice(m, &reg) {
            return Ok(c);
        }
        delta *= 100.0;
    }
    Err(Error::NotPositiveDefinite)
}

/// Solves `A(dX) = rp`, `Σ dy A + dS = rd`, `dX S + X dS = rc`.
#[allow(clippy::too_many_arguments)]
fn direction(
    a: &[Constraint],
    rp: &[f64],
    rd: &SymMatrix,
    rc: &[f64],
    x: &SymMatrix,
    s_inv: &SymMatrix,
    schur: &Schur,
    n: usize,
) -> Direction {
    // dX = (rc − X dS) S⁻¹ with dS = rd − Σ dy A.
    let xrd = gemm(n, x.as_slice(), rd.as_slice());
    let t: Vec<f64> = rc.iter().zip(&xrd).map(|(p, q)| p - q).collect();
    let g = gemm(n, &t, s_inv.as_slice());
    let rhs: Vec<f64> = a.iter().zip(rp).map(|(ak, &r)| r - ak.dot(&g, n)).collect();
    let dy = schur.solve(&rhs);
    let mut ds = rd.sub(&adjoint(a, &dy, n));
    ds.symmetrize();
    let xds = gemm(n, x.as_slice(), ds.as_slice());
    let t: Vec<f64> = rc.iter().zip(&xds).map(|(p, q)| p - q).collect();
    let mut dx = SymMatrix::from_raw(n, gemm(n, &t, s_inv.as_slice()));
    dx.symmetrize();
    Direction { dx, dy, ds }
}
