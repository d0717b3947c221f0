//! Measurement scenarios and their JSON file format.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    /// `⟨A_{s1} ⋯ A_{sn}⟩_seq` for binary settings, outcome 0 ↦ +1 and outcome 1 ↦ −1.
    Correlator,
    /// `P(r1 … rn | s1 … sn)`.
    Probability,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveTerm {
    pub kind: TermKind,
    /// Settings in measurement order.
    pub sequence: Vec<usize>,
    /// Outcomes, one per setting; empty for correlators.
    pub outcomes: Vec<usize>,
    pub coefficient: f64,
}

impl ObjectiveTerm {
    pub fn correlator(sequence: Vec<usize>, coefficient: f64) -> Self {
        Self {
            kind: TermKind::Correlator,
            sequence,
            outcomes: Vec::new(),
            coefficient,
        }
    }

    pub fn probability(sequence: Vec<usize>, outcomes: Vec<usize>, coefficient: f64) -> Self {
        Self {
            kind: TermKind::Probability,
            sequence,
            outcomes,
            coefficient,
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }
}

/// Settings, outcome counts, and a linear objective over sequential statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Outcome count of each setting; setting ids are positions.
    pub outcomes: Vec<usize>,
    pub sequence_length: usize,
    pub objective: Vec<ObjectiveTerm>,
    pub reference_values: BTreeMap<String, f64>,
}

impl Scenario {
    /// Empty-objective scenario; mostly for tests and builders.
    pub fn with_outcomes(name: &str, outcomes: &[usize], sequence_length: usize) -> Self {
        Self {
            name: name.to_string(),
            outcomes: outcomes.to_vec(),
            sequence_length,
            objective: Vec::new(),
            reference_values: BTreeMap::new(),
        }
    }

    pub fn binary(name: &str, settings: usize, sequence_length: usize) -> Self {
        Self::with_outcomes(name, &vec![2; settings], sequence_length)
    }

    pub fn num_settings(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome_count(&self, setting: usize) -> Result<usize> {
        self.outcomes
            .get(setting)
            .copied()
            .ok_or(Error::UnknownSetting(setting))
    }

    pub fn is_binary(&self, setting: usize) -> bool {
        self.outcomes.get(setting) == Some(&2)
    }

    pub fn push_term(&mut self, term: ObjectiveTerm) -> &mut Self {
        self.objective.push(term);
        self
    }

    pub fn longest_term(&self) -> usize {
        self.objective.iter().map(ObjectiveTerm::len).max().unwrap_or(0)
    }

    /// True when every term is a correlator of length one or two.
    pub fn is_two_point_correlator(&self) -> bool {
        self.objective
            .iter()
            .all(|t| t.kind == TermKind::Correlator && (1..=2).contains(&t.len()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if self.sequence_length == 0 {
            return bad("sequence_length must be at least 1".into());
        }
        if self.outcomes.is_empty() {
            return bad("scenario has no settings".into());
        }
        for (s, &k) in self.outcomes.iter().enumerate() {
            if k < 2 {
                return bad(format!("setting {s} has {k} outcomes; at least 2 required"));
            }
        }
        for (i, t) in self.objective.iter().enumerate() {
            if !t.coefficient.is_finite() {
                return bad(format!("objective[{i}]: coefficient is not finite"));
            }
            if t.sequence.is_empty() {
                return bad(format!("objective[{i}]: empty setting sequence"));
            }
            if t.len() > self.sequence_length {
                return bad(format!(
                    "objective[{i}]: sequence of length {} exceeds sequence_length {}",
                    t.len(),
                    self.sequence_length
                ));
            }
            for &s in &t.sequence {
                if s >= self.num_settings() {
                    return bad(format!("objective[{i}]: unknown setting {s}"));
                }
            }
            match t.kind {
                TermKind::Correlator => {
                    if !t.outcomes.is_empty() {
                        return bad(format!("objective[{i}]: correlator terms take no outcomes"));
                    }
                    if let Some(&s) = t.sequence.iter().find(|&&s| !self.is_binary(s)) {
                        return bad(format!(
                            "objective[{i}]: correlator requires binary setting (setting {s} has {} outcomes)",
                            self.outcomes[s]
                        ));
                    }
                }
                TermKind::Probability => {
                    if t.outcomes.len() != t.sequence.len() {
                        return bad(format!(
                            "objective[{i}]: {} settings but {} outcomes",
                            t.sequence.len(),
                            t.outcomes.len()
                        ));
                    }
                    for (&s, &r) in t.sequence.iter().zip(&t.outcomes) {
                        if r >= self.outcomes[s] {
                            return bad(format!(
                                "objective[{i}]: outcome {r} out of range for setting {s} ({} outcomes)",
                                self.outcomes[s]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            name: self.name.clone(),
            settings: self
                .outcomes
                .iter()
                .enumerate()
                .map(|(id, &outcomes)| SettingEntry { id, outcomes })
                .collect(),
            sequence_length: self.sequence_length,
            objective: self
                .objective
                .iter()
                .map(|t| match t.kind {
                    TermKind::Correlator => TermEntry::Correlator {
                        sequence: t.sequence.clone(),
                        coeff: t.coefficient,
                    },
                    TermKind::Probability => TermEntry::Probability {
                        settings: t.sequence.clone(),
                        outcomes: t.outcomes.clone(),
                        coeff: t.coefficient,
                    },
                })
                .collect(),
            reference_values: if self.reference_values.is_empty() {
                None
            } else {
                Some(self.reference_values.clone())
            },
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidScenario(format!("parse error at line {}, column {}: {e}", e.line(), e.column())))?;
        file.into_scenario()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ScenarioFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Scenario::from_json(&text).map_err(|e| Error::ScenarioFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// On-disk representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub settings: Vec<SettingEntry>,
    pub sequence_length: usize,
    pub objective: Vec<TermEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_values: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingEntry {
    pub id: usize,
    pub outcomes: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TermEntry {
    Correlator {
        sequence: Vec<usize>,
        coeff: f64,
    },
    Probability {
        settings: Vec<usize>,
        outcomes: Vec<usize>,
        coeff: f64,
    },
}

impl ScenarioFile {
    pub fn into_scenario(self) -> Result<Scenario> {
        let k = self.settings.len();
        let mut outcomes = vec![0usize; k];
        let mut seen = vec![false; k];
        for (pos, s) in self.settings.iter().enumerate() {
            if s.id >= k || seen[s.id] {
                return Err(Error::InvalidScenario(format!(
                    "settings[{pos}]: ids must be 0..{} without repeats (found {})",
                    k.saturating_sub(1),
                    s.id
                )));
            }
            seen[s.id] = true;
            outcomes[s.id] = s.outcomes;
        }
        let objective = self
            .objective
            .into_iter()
            .map(|t| match t {
                TermEntry::Correlator { sequence, coeff } => ObjectiveTerm::correlator(sequence, coeff),
                TermEntry::Probability {
                    settings,
                    outcomes,
                    coeff,
                } => ObjectiveTerm::probability(settings, outcomes, coeff),
            })
            .collect();
        let sc = Scenario {
            name: self.name,
            outcomes,
            sequence_length: self.sequence_length,
            objective,
            reference_values: self.reference_values.unwrap_or_default(),
        };
        sc.validate()?;
        Ok(sc)
    }
}
