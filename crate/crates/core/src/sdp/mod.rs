//! Semidefinite programs over class-structured symmetric matrices.
//!
//! Both programs solved here share one shape: maximize `⟨C, X⟩ + offset` over
//! symmetric `X ⪰ 0` whose upper-triangle positions are partitioned into free
//! equality classes (all members equal, value unconstrained) and fixed entries.
//! The correlation-matrix program has singleton off-diagonal classes and a unit
//! diagonal; the moment program ties entries by reduced monomial.
//!
//! Two backends are provided: a primal-dual interior-point method for small
//! instances and an ADMM splitting method whose cost per iteration is one
//! eigendecomposition.

mod admm;
mod certificate;
mod ipm;

pub use admm::{solve_admm, AdmmOptions};
pub use certificate::{verify_dual_certificate, Certificate};
pub use ipm::{solve_ipm, IpmOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moment::MomentProblem;
use crate::numerics::SymMatrix;
use crate::scenario::Scenario;

/// Largest moment index handled by the interior-point backend unless overridden.
pub const DEFAULT_IPM_CAP: usize = 300;
pub const DEFAULT_ADMM_TOL: f64 = 1e-6;
pub const DEFAULT_ADMM_MAX_ITER: usize = 50_000;

/// Data common to every program solved by this module.
#[derive(Clone, Debug)]
pub struct SdpInstance {
    pub dim: usize,
    /// Upper-triangle positions `(i, j)`, `i ≤ j`, constrained to share a value.
    pub free_classes: Vec<Vec<(usize, usize)>>,
    /// `(i, j, value)` with `i ≤ j`.
    pub fixed: Vec<(usize, usize, f64)>,
    pub objective: SymMatrix,
    pub offset: f64,
    /// Upper bound on `tr X` over the feasible set; scales the certificate shift.
    pub trace_bound: f64,
}

impl SdpInstance {
    /// Number of scalar equality constraints in standard form.
    pub fn constraint_count(&self) -> usize {
        self.fixed.len()
            + self
                .free_classes
                .iter()
                .map(|c| c.len().saturating_sub(1))
                .sum::<usize>()
    }

    /// Projection onto the affine set (Frobenius metric): class means and fixed values.
    pub fn project_affine(&self, m: &SymMatrix) -> SymMatrix {
        let mut out = m.clone();
        for class in &self.free_classes {
            let mut sum = 0.0;
            let mut weight = 0.0;
            for &(i, j) in class {
                let w = if i == j { 1.0 } else { 2.0 };
                sum += w * m.get(i, j);
                weight += w;
            }
            let mean = sum / weight;
            for &(i, j) in class {
                out.set(i, j, mean);
            }
        }
        for &(i, j, v) in &self.fixed {
            out.set(i, j, v);
        }
        out
    }

    /// `⟨C, X⟩ + offset`.
    pub fn value(&self, x: &SymMatrix) -> f64 {
        self.objective.dot(x) + self.offset
    }

    /// Largest violation of the affine constraints.
    pub fn affine_residual(&self, x: &SymMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for class in &self.free_classes {
            let (lo, hi) = class
                .iter()
                .map(|&(i, j)| x.get(i, j))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if lo.is_finite() {
                worst = worst.max(hi - lo);
            }
        }
        for &(i, j, v) in &self.fixed {
            worst = worst.max((x.get(i, j) - v).abs());
        }
        worst
    }
}

/// Anything that can be lowered to an [`SdpInstance`].
pub trait AsInstance {
    fn instance(&self) -> SdpInstance;
}

impl AsInstance for SdpInstance {
    fn instance(&self) -> SdpInstance {
        self.clone()
    }
}

impl AsInstance for MomentProblem {
    fn instance(&self) -> SdpInstance {
        MomentProblem::instance(self)
    }
}

impl AsInstance for CorrelationProblem {
    fn instance(&self) -> SdpInstance {
        CorrelationProblem::instance(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Ipm,
    Admm,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Ipm => "ipm",
            Backend::Admm => "admm",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub matrix: SymMatrix,
    pub primal_value: f64,
    /// Upper bound from the dual iterate (certified bounds come from [`verify_dual_certificate`]).
    pub dual_value: f64,
    /// Multipliers of the fixed entries, in instance order.
    pub dual_variables: Vec<f64>,
    /// Dual slack `Y − C`, when the backend produces one.
    pub dual_slack: Option<SymMatrix>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub backend: Backend,
    pub tolerance: f64,
}

impl SdpSolution {
    pub fn gap(&self) -> f64 {
        (self.dual_value - self.primal_value).abs()
    }
}

/// `maximize Σ λ_ij X_ij` over unit-diagonal PSD matrices.
#[derive(Clone, Debug)]
pub struct CorrelationProblem {
    pub coefficients: SymMatrix,
}

impl CorrelationProblem {
    pub fn new(coefficients: SymMatrix) -> Result<Self> {
        if !coefficients.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { coefficients })
    }

    /// Correlation-matrix form of a scenario made of correlators of length one or two.
    ///
    /// `⟨A_iA_j⟩_seq` contributes `c/2` to `λ_ij` and `λ_ji`. A length-one term
    /// `⟨A_i⟩` pairs `A_i` with an extra constant observable appended as the last
    /// index, so the program then bounds rather than equals the quantum value.
    pub fn from_scenario(s: &Scenario) -> Result<Self> {
        s.validate()?;
        if !s.is_two_point_correlator() {
            return Err(Error::InvalidScenario(
                "the simplified method needs an objective of correlators with one or two settings".into(),
            ));
        }
        let k = s.num_settings();
        let n = if has_constant_observable(s) { k + 1 } else { k };
        let mut lam = SymMatrix::zeros(n);
        for t in &s.objective {
            match t.sequence[..] {
                [i] => lam.add_sym(i, k, 0.5 * t.coefficient),
                [i, j] if i == j => lam.add_sym(i, i, t.coefficient),
                [i, j] => lam.add_sym(i, j, 0.5 * t.coefficient),
                _ => unreachable!("checked above"),
            }
        }
        Self::new(lam)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.dim()
    }

    /// Diagonal coefficients multiply `X_ii = 1` and only shift the value.
    pub fn offset(&self) -> f64 {
        self.coefficients.trace()
    }

    pub fn instance(&self) -> SdpInstance {
        let n = self.dim();
        let mut objective = self.coefficients.clone();
        for i in 0..n {
            objective.set(i, i, 0.0);
        }
        let free_classes = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| vec![(i, j)]))
            .collect();
        SdpInstance {
            dim: n,
            free_classes,
            fixed: (0..n).map(|i| (i, i, 1.0)).collect(),
            objective,
            offset: self.offset(),
            trace_bound: n as f64,
        }
    }
}

/// Whether [`CorrelationProblem::from_scenario`] appends a constant observable.
pub fn has_constant_observable(s: &Scenario) -> bool {
    s.objective.iter().any(|t| t.len() == 1)
}

/// Interior-point solve of the correlation-matrix program.
///
/// `dual_variables` holds the diagonal multipliers `λ` with `diag(λ) − Λ ⪰ 0`.
pub fn solve_correlation(p: &CorrelationProblem, tol: f64) -> Result<SdpSolution> {
    let opts = IpmOptions {
        tol,
        ..IpmOptions::default()
    };
    let sol = solve_ipm(&p.instance(), &opts)?;
    if !sol.converged {
        return Err(Error::NotConverged {
            iterations: sol.iterations,
        });
    }
    Ok(sol)
}

/// Interior-point solve of a moment problem whose index is at most `cap` words.
pub fn solve_moment_ipm_capped(p: &MomentProblem, tol: f64, cap: usize) -> Result<SdpSolution> {
    if p.dim() > cap {
        return Err(Error::SizeCap { size: p.dim(), cap });
    }
    let opts = IpmOptions {
        tol,
        ..IpmOptions::default()
    };
    let sol = solve_ipm(&p.instance(), &opts)?;
    if !sol.converged {
        return Err(Error::NotConverged {
            iterations: sol.iterations,
        });
    }
    Ok(sol)
}

pub fn solve_moment_ipm(p: &MomentProblem, tol: f64) -> Result<SdpSolution> {
    solve_moment_ipm_capped(p, tol, DEFAULT_IPM_CAP)
}

/// ADMM solve; a non-converged run still returns its last iterate with `converged = false`.
pub fn solve_moment_admm(p: &MomentProblem, tol: f64, max_iter: usize) -> Result<SdpSolution> {
    let opts = AdmmOptions {
        tol,
        max_iter,
        ..AdmmOptions::default()
    };
    solve_admm(&p.instance(), &opts)
}
