//! Classical reference values.
//!
//! [`nchv_bound`] maximizes over noncontextual (macrorealist) models: one fixed
//! outcome per setting, regardless of where in a sequence it is measured.
//! [`algebraic_max`] maximizes over deterministic devices with memory, whose
//! answer may depend on the whole history of earlier settings and outcomes.
//! Randomized strategies are convex mixtures of these and cannot do better.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scenario::{Scenario, TermKind};

/// Largest assignment space [`nchv_bound`] will enumerate.
pub const NCHV_CAP: u128 = 1 << 24;
/// Largest number of shared history nodes [`algebraic_max`] will enumerate.
pub const MEMORY_NODE_CAP: usize = 30;

/// `+1` for outcome 0, `−1` for outcome 1.
fn sign(outcome: usize) -> f64 {
    if outcome == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One fixed outcome per setting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicAssignment {
    pub outcomes: Vec<usize>,
}

impl DeterministicAssignment {
    pub fn value(&self, s: &Scenario) -> f64 {
        s.objective
            .iter()
            .map(|t| {
                let realized = t.sequence.iter().map(|&k| self.outcomes[k]);
                match t.kind {
                    TermKind::Correlator => t.coefficient * realized.map(sign).product::<f64>(),
                    TermKind::Probability => {
                        if realized.eq(t.outcomes.iter().copied()) {
                            t.coefficient
                        } else {
                            0.0
                        }
                    }
                }
            })
            .sum()
    }
}

fn check_cap(size: u128, cap: u128) -> Result<()> {
    if size > cap {
        return Err(Error::EnumerationCap { size, cap });
    }
    Ok(())
}

/// Maximum over all [`DeterministicAssignment`]s, with the default cap.
pub fn nchv_bound(s: &Scenario) -> Result<f64> {
    nchv_bound_capped(s, NCHV_CAP).map(|(v, _)| v)
}

/// Maximum and a maximizing assignment, enumerating at most `cap` assignments.
pub fn nchv_bound_capped(s: &Scenario, cap: u128) -> Result<(f64, DeterministicAssignment)> {
    s.validate()?;
    let radix = s.outcomes.clone();
    let size = radix
        .iter()
        .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128))
        .unwrap_or(u128::MAX);
    check_cap(size, cap)?;

    let mut current = DeterministicAssignment {
        outcomes: vec![0; radix.len()],
    };
    let mut best = (f64::NEG_INFINITY, current.clone());
    loop {
        let v = current.value(s);
        if v > best.0 {
            best = (v, current.clone());
        }
        if !increment(&mut current.outcomes, &radix) {
            break;
        }
    }
    Ok(best)
}

/// Mixed-radix counter; returns `false` after wrapping around.
fn increment(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// A history node: settings measured so far (the last one is being answered)
/// and the outcomes already produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistoryNode {
    pub settings: Vec<usize>,
    pub outcomes: Vec<usize>,
}

impl HistoryNode {
    fn is_proper_prefix_of(&self, other: &HistoryNode) -> bool {
        self.settings.len() < other.settings.len()
            && other.settings.starts_with(&self.settings)
            && other.outcomes.starts_with(&self.outcomes)
            && other.outcomes.get(self.outcomes.len()).is_some()
    }
}

/// Outcome per history node.
#[derive(Clone, Debug)]
pub struct MemoryStrategy {
    pub nodes: Vec<HistoryNode>,
    pub outcomes: Vec<usize>,
}

/// One outcome sequence of one term: pays `weight` when every node on `path`
/// answers the matching entry of `outcomes`.
struct Branch {
    path: Vec<usize>,
    outcomes: Vec<usize>,
    weight: f64,
}

struct HistoryTree {
    nodes: Vec<HistoryNode>,
    outcome_counts: Vec<usize>,
    branches: Vec<Branch>,
}

impl HistoryTree {
    fn build(s: &Scenario) -> Result<Self> {
        let mut lookup: HashMap<HistoryNode, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut outcome_counts = Vec::new();
        let mut branches = Vec::new();

        for term in &s.objective {
            let counts: Vec<usize> = term
                .sequence
                .iter()
                .map(|&k| s.outcome_count(k))
                .collect::<Result<_>>()?;
            let sequences: Vec<(Vec<usize>, f64)> = match term.kind {
                TermKind::Probability => vec![(term.outcomes.clone(), term.coefficient)],
                TermKind::Correlator => {
                    let mut all = Vec::new();
                    let mut r = vec![0; counts.len()];
                    loop {
                        let w = term.coefficient * r.iter().copied().map(sign).product::<f64>();
                        all.push((r.clone(), w));
                        if !increment(&mut r, &counts) {
                            break;
                        }
                    }
                    all
                }
            };
            for (r, weight) in sequences {
                let path = (0..term.sequence.len())
                    .map(|k| {
                        let node = HistoryNode {
                            settings: term.sequence[..=k].to_vec(),
                            outcomes: r[..k].to_vec(),
                        };
                        *lookup.entry(node.clone()).or_insert_with(|| {
                            nodes.push(node);
                            outcome_counts.push(counts[k]);
                            nodes.len() - 1
                        })
                    })
                    .collect();
                branches.push(Branch {
                    path,
                    outcomes: r,
                    weight,
                });
            }
        }
        Ok(Self {
            nodes,
            outcome_counts,
            branches,
        })
    }

    fn internal_mask(&self) -> Vec<bool> {
        self.nodes
            .iter()
            .map(|a| self.nodes.iter().any(|b| a.is_proper_prefix_of(b)))
            .collect()
    }
}

/// Number of history nodes and how many of them must be enumerated.
pub fn history_tree_size(s: &Scenario) -> Result<(usize, usize)> {
    s.validate()?;
    let tree = HistoryTree::build(s)?;
    let internal = tree.internal_mask().iter().filter(|&&b| b).count();
    Ok((tree.nodes.len(), internal))
}

/// Maximum over deterministic strategies with memory, with the default node cap.
pub fn algebraic_max(s: &Scenario) -> Result<f64> {
    algebraic_max_capped(s, MEMORY_NODE_CAP).map(|(v, _)| v)
}

pub fn algebraic_max_capped(s: &Scenario, node_cap: usize) -> Result<(f64, MemoryStrategy)> {
    s.validate()?;
    let tree = HistoryTree::build(s)?;
    let internal = tree.internal_mask();
    let internal_ids: Vec<usize> = (0..tree.nodes.len()).filter(|&i| internal[i]).collect();
    if internal_ids.len() > node_cap {
        return Err(Error::EnumerationCap {
            size: internal_ids.len() as u128,
            cap: node_cap as u128,
        });
    }
    let radix: Vec<usize> = internal_ids.iter().map(|&i| tree.outcome_counts[i]).collect();

    let mut assign = vec![0usize; tree.nodes.len()];
    let mut digits = vec![0usize; internal_ids.len()];
    let mut leaf_scores: Vec<Vec<f64>> = tree.outcome_counts.iter().map(|&k| vec![0.0; k]).collect();
    let mut best = f64::NEG_INFINITY;
    let mut best_assign = assign.clone();

    loop {
        for (&id, &d) in internal_ids.iter().zip(&digits) {
            assign[id] = d;
        }
        for row in leaf_scores.iter_mut() {
            row.iter_mut().for_each(|v| *v = 0.0);
        }
        let mut direct = 0.0;
        for b in &tree.branches {
            let (&last, head) = b.path.split_last().expect("terms are non-empty");
            let live = head.iter().zip(&b.outcomes).all(|(&n, &o)| assign[n] == o);
            if !live {
                continue;
            }
            let o = b.outcomes[head.len()];
            if internal[last] {
                if assign[last] == o {
                    direct += b.weight;
                }
            } else {
                leaf_scores[last][o] += b.weight;
            }
        }
        let mut total = direct;
        let mut leaf_choice = Vec::new();
        for (id, row) in leaf_scores.iter().enumerate() {
            if internal[id] {
                continue;
            }
            let (o, v) = row
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (o, v)| if v > acc.1 { (o, v) } else { acc });
            total += v;
            leaf_choice.push((id, o));
        }
        if total > best {
            best = total;
            best_assign = assign.clone();
            for (id, o) in leaf_choice {
                best_assign[id] = o;
            }
        }
        if !increment(&mut digits, &radix) {
            break;
        }
    }

    Ok((
        best,
        MemoryStrategy {
            nodes: tree.nodes,
            outcomes: best_assign,
        },
    ))
}
