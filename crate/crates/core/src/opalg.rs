//! Words in leave-one-out projectors.
//!
//! Every setting `s` with `k` outcomes contributes the letters `E_{s,0} … E_{s,k-2}`;
//! the highest outcome is dropped and recovered from completeness,
//! `Π_{k-1} = 1 − Σ_r E_{s,r}`. Products are kept in canonical form: equal
//! neighbours collapse (idempotence) and distinct neighbours of the same setting
//! annihilate the word (orthogonality). The leftmost letter is the first
//! measurement in time.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub setting: usize,
    pub outcome: usize,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}.{}", self.setting, self.outcome)
    }
}

/// Builds a letter after checking it against the scenario's outcome counts.
pub fn make_letter(setting: usize, outcome: usize, scenario: &Scenario) -> Result<Letter> {
    let count = scenario.outcome_count(setting)?;
    if outcome >= count {
        return Err(Error::OutcomeOutOfRange {
            setting,
            outcome,
            count,
        });
    }
    if outcome == count - 1 {
        return Err(Error::DroppedOutcome { setting, outcome });
    }
    Ok(Letter { setting, outcome })
}

/// A canonical product of letters, or the annihilated word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
    zero: bool,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn zero() -> Self {
        Self {
            letters: Vec::new(),
            zero: true,
        }
    }

    pub fn letter(l: Letter) -> Self {
        Self {
            letters: vec![l],
            zero: false,
        }
    }

    /// Reduces an arbitrary letter sequence to canonical form.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push(l);
            if w.zero {
                break;
            }
        }
        w
    }

    fn push(&mut self, l: Letter) {
        if self.zero {
            return;
        }
        match self.letters.last() {
            Some(last) if *last == l => {}
            Some(last) if last.setting == l.setting => {
                self.letters.clear();
                self.zero = true;
            }
            _ => self.letters.push(l),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_identity(&self) -> bool {
        !self.zero && self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Adjoint of a product of Hermitian projectors.
    pub fn reverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().copied().collect(),
            zero: self.zero,
        }
    }

    /// Representative shared by `w` and its adjoint.
    pub fn class_key(&self) -> Self {
        let r = self.reverse();
        if r < *self {
            r
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Canonical form of the product `a·b`.
pub fn concat_reduce(a: &Word, b: &Word) -> Word {
    if a.zero || b.zero {
        return Word::zero();
    }
    let mut out = a.clone();
    for &l in &b.letters {
        out.push(l);
        if out.zero {
            break;
        }
    }
    out
}

pub fn reverse(w: &Word) -> Word {
    w.reverse()
}

/// Real linear combination of canonical words; the zero word never appears.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinComb {
    terms: BTreeMap<Word, f64>,
}

impl LinComb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(Word::identity(), 1.0)
    }

    pub fn term(w: Word, c: f64) -> Self {
        let mut lc = Self::new();
        lc.add_term(w, c);
        lc
    }

    pub fn add_term(&mut self, w: Word, c: f64) {
        if w.is_zero() || c == 0.0 {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e += c;
                if *e == 0.0 {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn coefficient(&self, w: &Word) -> f64 {
        self.terms.get(w).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word carried by the combination.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = Self::new();
        for (w, c) in self.iter() {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn add(&mut self, other: &LinComb) {
        for (w, c) in other.iter() {
            self.add_term(w.clone(), c);
        }
    }

    /// Product `self · other` with every word reduced.
    pub fn mul(&self, other: &LinComb) -> LinComb {
        let mut out = LinComb::new();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(concat_reduce(a, b), ca * cb);
            }
        }
        out
    }

    pub fn reverse(&self) -> LinComb {
        let mut out = LinComb::new();
        for (w, c) in self.iter() {
            out.add_term(w.reverse(), c);
        }
        out
    }
}

/// `Π_outcome^setting` expressed in kept letters.
pub fn expand_outcome(setting: usize, outcome: usize, scenario: &Scenario) -> Result<LinComb> {
    let count = scenario.outcome_count(setting)?;
    if outcome >= count {
        return Err(Error::OutcomeOutOfRange {
            setting,
            outcome,
            count,
        });
    }
    if outcome + 1 < count {
        return Ok(LinComb::term(Word::letter(Letter { setting, outcome }), 1.0));
    }
    let mut lc = LinComb::identity();
    for r in 0..count - 1 {
        lc.add_term(Word::letter(Letter { setting, outcome: r }), -1.0);
    }
    Ok(lc)
}

/// `Π(r|s) = Π_{r1}^{s1} ⋯ Π_{rn}^{sn}` expanded in canonical words.
pub fn expand_sequence(settings: &[usize], outcomes: &[usize], scenario: &Scenario) -> Result<LinComb> {
    if settings.len() != outcomes.len() {
        return Err(Error::InvalidArgument(format!(
            "{} settings but {} outcomes",
            settings.len(),
            outcomes.len()
        )));
    }
    let mut acc = LinComb::identity();
    for (&s, &r) in settings.iter().zip(outcomes) {
        acc = acc.mul(&expand_outcome(s, r, scenario)?);
    }
    Ok(acc)
}

/// All canonical nonzero words over `letters` of length exactly `len`, in lexicographic order.
pub fn words_of_length(letters: &[Letter], len: usize) -> Vec<Word> {
    let mut sorted = letters.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut out = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * sorted.len());
        for w in &out {
            for &l in &sorted {
                if w.last().is_some_and(|last| last.setting == l.setting) {
                    continue;
                }
                let mut nw = w.clone();
                nw.letters.push(l);
                next.push(nw);
            }
        }
        out = next;
    }
    out
}
