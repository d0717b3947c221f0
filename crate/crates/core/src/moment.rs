//! Moment matrices over projector words.
//!
//! Rows and columns are indexed by every canonical nonzero word of length at most
//! the scenario's sequence length, identity first. Entry `(u, v)` stands for
//! `Tr[E(u) E(v)† ϱ]`; two entries are tied whenever their reduced monomials
//! `u·rev(v)` agree up to reversal, entries whose monomial vanishes are pinned to
//! zero, and the identity entry is pinned to one.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::opalg::{concat_reduce, expand_sequence, words_of_length, Letter, LinComb, Word};
use crate::scenario::{Scenario, TermKind};
use crate::sdp::{SdpInstance, SdpSolution};

/// Default absolute tolerance on probabilities read off a solution.
pub const PROBABILITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct MomentIndex {
    words: Vec<Word>,
    lookup: HashMap<Word, usize>,
}

impl MomentIndex {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.lookup.get(w).copied()
    }
}

/// All kept letters of a scenario in (setting, outcome) order.
pub fn kept_letters(scenario: &Scenario) -> Vec<Letter> {
    scenario
        .outcomes
        .iter()
        .enumerate()
        .flat_map(|(setting, &k)| (0..k.saturating_sub(1)).map(move |outcome| Letter { setting, outcome }))
        .collect()
}

pub fn build_index(scenario: &Scenario) -> MomentIndex {
    let letters = kept_letters(scenario);
    let mut words = Vec::new();
    for len in 0..=scenario.sequence_length {
        words.extend(words_of_length(&letters, len));
    }
    let lookup = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    MomentIndex { words, lookup }
}

/// Upper-triangle positions sharing one reduced monomial (up to reversal).
#[derive(Clone, Debug)]
pub struct MomentClass {
    pub key: Word,
    pub positions: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct MomentProblem {
    pub scenario: Scenario,
    pub index: MomentIndex,
    pub classes: Vec<MomentClass>,
    pub zero_entries: Vec<(usize, usize)>,
    /// Symmetric coefficient matrix `C`; the objective is `⟨C, M⟩`.
    pub objective: SymMatrix,
    /// Class containing `(0, 0)`, pinned to one.
    pub identity_class: usize,
    class_lookup: HashMap<Word, usize>,
}

impl MomentProblem {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Class of the reduced monomial of `(i, j)`, `None` for pinned zeros.
    pub fn class_of(&self, i: usize, j: usize) -> Option<usize> {
        let ws = self.index.words();
        let m = concat_reduce(&ws[i], &ws[j].reverse());
        if m.is_zero() {
            None
        } else {
            self.class_lookup.get(&m.class_key()).copied()
        }
    }

    pub fn class_by_key(&self, key: &Word) -> Option<usize> {
        self.class_lookup.get(&key.class_key()).copied()
    }

    /// Linear program data for the solvers: every class other than the identity is
    /// free; the identity and vanishing monomials are fixed.
    pub fn instance(&self) -> SdpInstance {
        let mut fixed = vec![(0usize, 0usize, 1.0)];
        // Other members of the identity class (none for canonical words, kept for safety).
        for &(i, j) in &self.classes[self.identity_class].positions {
            if (i, j) != (0, 0) {
                fixed.push((i, j, 1.0));
            }
        }
        fixed.extend(self.zero_entries.iter().map(|&(i, j)| (i, j, 0.0)));
        let free = self
            .classes
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != self.identity_class)
            .map(|(_, c)| c.positions.clone())
            .collect();
        SdpInstance {
            dim: self.dim(),
            free_classes: free,
            fixed,
            objective: self.objective.clone(),
            offset: 0.0,
            // Diagonal entries are squared norms of contractions of a unit vector.
            trace_bound: self.dim() as f64,
        }
    }

    /// `P(r|s)` as a quadratic form in `Π(r|s)`'s word expansion.
    pub fn probability_form(&self, settings: &[usize], outcomes: &[usize]) -> Result<Vec<(usize, usize, f64)>> {
        let pi = expand_sequence(settings, outcomes, &self.scenario)?;
        self.quadratic_form(&pi)
    }

    /// Entries `(i, j, c)` with `⟨L L†⟩ = Σ c M_ij`.
    fn quadratic_form(&self, lc: &LinComb) -> Result<Vec<(usize, usize, f64)>> {
        let mut out = Vec::with_capacity(lc.len() * lc.len());
        let terms: Vec<(usize, f64)> = lc
            .iter()
            .map(|(w, c)| {
                self.index.position(w).map(|p| (p, c)).ok_or_else(|| {
                    Error::InvalidScenario(format!("word {w} exceeds the moment index"))
                })
            })
            .collect::<Result<_>>()?;
        for &(a, ca) in &terms {
            for &(b, cb) in &terms {
                out.push((a, b, ca * cb));
            }
        }
        Ok(out)
    }

    /// Evaluates `P(r|s)` on a moment matrix.
    pub fn probability(&self, m: &SymMatrix, settings: &[usize], outcomes: &[usize]) -> Result<f64> {
        Ok(self
            .probability_form(settings, outcomes)?
            .iter()
            .map(|&(i, j, c)| c * m.get(i, j))
            .sum())
    }

    /// Largest spread of values inside one equality class, and largest pinned-entry error.
    pub fn class_residual(&self, m: &SymMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, c) in self.classes.iter().enumerate() {
            let vals = c.positions.iter().map(|&(i, j)| m.get(i, j));
            if k == self.identity_class {
                worst = vals.fold(worst, |w, v| w.max((v - 1.0).abs()));
                continue;
            }
            let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            worst = worst.max(hi - lo);
        }
        for &(i, j) in &self.zero_entries {
            worst = worst.max(m.get(i, j).abs());
        }
        worst
    }

    /// Replaces each class by its mean and pins fixed entries.
    pub fn symmetrize_classes(&self, m: &SymMatrix) -> SymMatrix {
        let mut out = m.clone();
        for (k, c) in self.classes.iter().enumerate() {
            let mean = if k == self.identity_class {
                1.0
            } else {
                c.positions.iter().map(|&(i, j)| m.get(i, j)).sum::<f64>() / c.positions.len() as f64
            };
            for &(i, j) in &c.positions {
                out.set(i, j, mean);
            }
        }
        for &(i, j) in &self.zero_entries {
            out.set(i, j, 0.0);
        }
        out
    }
}

pub fn build_problem(scenario: &Scenario) -> Result<MomentProblem> {
    scenario.validate()?;
    let index = build_index(scenario);
    let n = index.len();
    let ws = index.words();

    let mut class_lookup: HashMap<Word, usize> = HashMap::new();
    let mut classes: Vec<MomentClass> = Vec::new();
    let mut zero_entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            let m = concat_reduce(&ws[i], &ws[j].reverse());
            if m.is_zero() {
                zero_entries.push((i, j));
                continue;
            }
            let key = m.class_key();
            let k = *class_lookup.entry(key.clone()).or_insert_with(|| {
                classes.push(MomentClass {
                    key,
                    positions: Vec::new(),
                });
                classes.len() - 1
            });
            classes[k].positions.push((i, j));
        }
    }
    let identity_class = class_lookup[&Word::identity()];

    let mut problem = MomentProblem {
        scenario: scenario.clone(),
        index,
        classes,
        zero_entries,
        objective: SymMatrix::zeros(n),
        identity_class,
        class_lookup,
    };

    let mut c = SymMatrix::zeros(n);
    for term in &scenario.objective {
        let mut add_form = |form: Vec<(usize, usize, f64)>, weight: f64| {
            for (i, j, v) in form {
                if problem.class_of(i, j).is_none() {
                    continue;
                }
                // The double sum visits (i, j) and (j, i) alike, so adding to one
                // cell keeps C symmetric.
                c.as_mut_slice()[i * n + j] += weight * v;
            }
        };
        match term.kind {
            TermKind::Probability => {
                add_form(problem.probability_form(&term.sequence, &term.outcomes)?, term.coefficient);
            }
            TermKind::Correlator => {
                for outcomes in outcome_sequences(&vec![2; term.len()]) {
                    let sign = if outcomes.iter().filter(|&&r| r == 1).count() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    add_form(problem.probability_form(&term.sequence, &outcomes)?, sign * term.coefficient);
                }
            }
        }
    }
    c.symmetrize();
    problem.objective = c;
    Ok(problem)
}

/// `⟨C, X⟩`.
pub fn evaluate_objective(problem: &MomentProblem, matrix: &SymMatrix) -> Result<f64> {
    if matrix.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: matrix.dim(),
        });
    }
    Ok(problem.objective.dot(matrix))
}

/// Every outcome tuple for the given per-position outcome counts, lexicographic.
pub fn outcome_sequences(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &k in counts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..k).map(move |r| {
                    let mut p = prefix.clone();
                    p.push(r);
                    p
                })
            })
            .collect();
    }
    out
}

/// Key of a sequential probability: settings, then outcomes.
pub type SequenceKey = (Vec<usize>, Vec<usize>);

/// Reads every `P(r|s)` with `|s| ≤ n` off a solved moment matrix.
pub fn extract_probabilities(
    solution: &SdpSolution,
    problem: &MomentProblem,
    tol: f64,
) -> Result<BTreeMap<SequenceKey, f64>> {
    if solution.matrix.dim() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: solution.matrix.dim(),
        });
    }
    let sc = &problem.scenario;
    let k = sc.num_settings();
    let mut out = BTreeMap::new();
    for len in 1..=sc.sequence_length {
        for settings in outcome_sequences(&vec![k; len]) {
            let counts: Vec<usize> = settings.iter().map(|&s| sc.outcomes[s]).collect();
            for outcomes in outcome_sequences(&counts) {
                let p = problem.probability(&solution.matrix, &settings, &outcomes)?;
                if !(-tol..=1.0 + tol).contains(&p) {
                    return Err(Error::ProbabilityOutOfRange {
                        label: format!("P({outcomes:?}|{settings:?})"),
                        value: p,
                    });
                }
                out.insert((settings.clone(), outcomes), p);
            }
        }
    }
    Ok(out)
}
