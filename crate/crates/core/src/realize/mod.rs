//! Explicit Hilbert-space realizations and a sequential-measurement simulator.
//!
//! A [`QuantumRealization`] holds a density matrix and one projective measurement
//! per setting. Realizations come from Clifford observables built on Gram vectors
//! of a correlation matrix ([`observables_from_vectors`]) or from a factored moment
//! matrix ([`gns_from_moments`]). Either way they are checked by replaying the
//! objective with Lüders updates `ϱ ↦ Π ϱ Π`.

mod clifford;
mod complex;
mod gns;

pub use clifford::{clifford_generators, gram_vectors, observables_from_vectors, planar_cycle_vectors, GramVectors};
pub use complex::CMatrix;
pub use gns::{gns_from_moments, gns_reconstruct, GnsReport, MAX_CLASS_RESIDUAL};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::sym_eig;
use crate::scenario::{Scenario, TermKind};

pub const VALIDATION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizationMetadata {
    pub scenario: String,
    pub method: String,
    pub primal: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumRealization {
    pub dimension: usize,
    pub state: CMatrix,
    /// `projectors[setting][outcome]`.
    pub projectors: Vec<Vec<CMatrix>>,
    pub metadata: Option<RealizationMetadata>,
}

/// Worst violations of the realization invariants.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidityReport {
    pub state_hermitian: f64,
    pub state_min_eigenvalue: f64,
    pub state_trace: f64,
    pub projector_hermitian: f64,
    pub idempotence: f64,
    pub orthogonality: f64,
    pub completeness: f64,
}

impl ValidityReport {
    pub fn worst(&self) -> f64 {
        [
            self.state_hermitian,
            (-self.state_min_eigenvalue).max(0.0),
            (self.state_trace - 1.0).abs(),
            self.projector_hermitian,
            self.idempotence,
            self.orthogonality,
            self.completeness,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl QuantumRealization {
    pub fn num_settings(&self) -> usize {
        self.projectors.len()
    }

    pub fn outcome_count(&self, setting: usize) -> Result<usize> {
        self.projectors
            .get(setting)
            .map(Vec::len)
            .ok_or(Error::UnknownSetting(setting))
    }

    fn projector(&self, setting: usize, outcome: usize) -> Result<&CMatrix> {
        let row = self.projectors.get(setting).ok_or(Error::UnknownSetting(setting))?;
        row.get(outcome).ok_or(Error::OutcomeOutOfRange {
            setting,
            outcome,
            count: row.len(),
        })
    }

    /// `Π_0 − Π_1` for a binary setting.
    pub fn observable(&self, setting: usize) -> Result<CMatrix> {
        let k = self.outcome_count(setting)?;
        if k != 2 {
            return Err(Error::InvalidArgument(format!(
                "setting {setting} has {k} outcomes; ±1 observables need 2"
            )));
        }
        Ok(self.projectors[setting][0].sub(&self.projectors[setting][1]))
    }

    pub fn with_state(mut self, state: CMatrix) -> Result<Self> {
        if state.n != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: state.n,
            });
        }
        self.state = state;
        Ok(self)
    }

    pub fn validity(&self) -> Result<ValidityReport> {
        let d = self.dimension;
        let check = |m: &CMatrix| -> Result<()> {
            if m.n != d {
                return Err(Error::DimensionMismatch { expected: d, found: m.n });
            }
            Ok(())
        };
        check(&self.state)?;
        let mut r = ValidityReport {
            state_hermitian: self.state.hermitian_defect(),
            state_trace: self.state.trace_re(),
            ..ValidityReport::default()
        };
        r.state_min_eigenvalue = sym_eig(&self.state.real_embedding())?
            .values
            .first()
            .copied()
            .unwrap_or(0.0);
        let id = CMatrix::identity(d);
        for row in &self.projectors {
            let mut sum = CMatrix::zeros(d);
            for (a, p) in row.iter().enumerate() {
                check(p)?;
                r.projector_hermitian = r.projector_hermitian.max(p.hermitian_defect());
                r.idempotence = r.idempotence.max(p.mul(p).sub(p).max_abs());
                for q in &row[a + 1..] {
                    r.orthogonality = r.orthogonality.max(p.mul(q).max_abs());
                }
                sum.add_scaled(1.0, p);
            }
            r.completeness = r.completeness.max(sum.sub(&id).max_abs());
        }
        Ok(r)
    }

    pub fn validate(&self, tol: f64) -> Result<ValidityReport> {
        let r = self.validity()?;
        let checks = [
            ("state is not Hermitian", r.state_hermitian),
            ("state is not positive semidefinite", (-r.state_min_eigenvalue).max(0.0)),
            ("state trace differs from one", (r.state_trace - 1.0).abs()),
            ("projector is not Hermitian", r.projector_hermitian),
            ("projector is not idempotent", r.idempotence),
            ("projectors of one setting are not orthogonal", r.orthogonality),
            ("projectors of one setting do not sum to identity", r.completeness),
        ];
        for (what, v) in checks {
            if v.is_nan() || v > tol {
                return Err(Error::InvalidRealization(format!("{what} (violation {v:e})")));
            }
        }
        Ok(r)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RealizationFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: RealizationFile = serde_json::from_str(text)?;
        f.into_realization()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    re: Vec<f64>,
    im: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RealizationFile {
    dimension: usize,
    state: MatrixFile,
    projectors: Vec<Vec<MatrixFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<RealizationMetadata>,
}

impl From<&QuantumRealization> for RealizationFile {
    fn from(r: &QuantumRealization) -> Self {
        let m = |c: &CMatrix| MatrixFile {
            re: c.re.clone(),
            im: c.im.clone(),
        };
        Self {
            dimension: r.dimension,
            state: m(&r.state),
            projectors: r.projectors.iter().map(|row| row.iter().map(m).collect()).collect(),
            metadata: r.metadata.clone(),
        }
    }
}

impl RealizationFile {
    fn into_realization(self) -> Result<QuantumRealization> {
        let d = self.dimension;
        let m = |f: MatrixFile| CMatrix::from_parts(d, f.re, f.im);
        Ok(QuantumRealization {
            dimension: d,
            state: m(self.state)?,
            projectors: self
                .projectors
                .into_iter()
                .map(|row| row.into_iter().map(m).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
            metadata: self.metadata,
        })
    }
}

/// `Tr[Π(r|s) Π(r|s)† ϱ]` with `Π(r|s) = Π^{s1}_{r1} ⋯ Π^{sn}_{rn}`, the first
/// measurement leftmost.
pub fn sequential_probability(r: &QuantumRealization, outcomes: &[usize], settings: &[usize]) -> Result<f64> {
    if outcomes.len() != settings.len() {
        return Err(Error::InvalidArgument(format!(
            "{} outcomes for {} settings",
            outcomes.len(),
            settings.len()
        )));
    }
    let mut rho = r.state.clone();
    for (&s, &o) in settings.iter().zip(outcomes) {
        let p = r.projector(s, o)?;
        rho = p.mul(&rho).mul(p);
    }
    Ok(rho.trace_re())
}

/// `Σ_r (∏ ±1) P(r|s)` for binary settings, outcome 0 counting as `+1`.
pub fn sequential_correlator(r: &QuantumRealization, settings: &[usize]) -> Result<f64> {
    let mut obs = Vec::with_capacity(settings.len());
    for &s in settings {
        if r.outcome_count(s)? != 2 {
            return Err(Error::InvalidArgument(format!("setting {s} is not binary")));
        }
        obs.push((&r.projectors[s][0], &r.projectors[s][1]));
    }
    fn branch(rho: &CMatrix, rest: &[(&CMatrix, &CMatrix)]) -> f64 {
        match rest.split_first() {
            None => rho.trace_re(),
            Some((&(p0, p1), tail)) => {
                branch(&p0.mul(rho).mul(p0), tail) - branch(&p1.mul(rho).mul(p1), tail)
            }
        }
    }
    Ok(branch(&r.state, &obs))
}

/// `½ Tr[ϱ (A_i A_j + A_j A_i)]`.
pub fn symmetrized_correlator(r: &QuantumRealization, i: usize, j: usize) -> Result<f64> {
    let (a, b) = (r.observable(i)?, r.observable(j)?);
    let mut anti = a.mul(&b);
    anti.add_scaled(1.0, &b.mul(&a));
    Ok(0.5 * r.state.mul(&anti).trace_re())
}

/// The scenario objective evaluated by simulation.
pub fn simulate_objective(r: &QuantumRealization, s: &Scenario) -> Result<f64> {
    s.objective.iter().try_fold(0.0, |acc, t| {
        let v = match t.kind {
            TermKind::Correlator => sequential_correlator(r, &t.sequence)?,
            TermKind::Probability => sequential_probability(r, &t.outcomes, &t.sequence)?,
        };
        Ok(acc + t.coefficient * v)
    })
}
