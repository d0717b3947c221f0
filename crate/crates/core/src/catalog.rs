//! Built-in scenarios: N-cycle (and Leggett-Garg), Yu-Oh, GYNI.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::scenario::{ObjectiveTerm, Scenario};
use crate::sdp::CorrelationProblem;

/// `Σ_i γ_i ⟨A_i A_{i+1}⟩_seq` with indices mod `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCycleSpec {
    pub signs: Vec<i8>,
}

impl NCycleSpec {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "an N-cycle needs N >= 3 (got {})",
                signs.len()
            )));
        }
        if signs.iter().any(|&g| g != 1 && g != -1) {
            return Err(Error::InvalidArgument("N-cycle signs must be ±1".into()));
        }
        if signs.iter().filter(|&&g| g == -1).count() % 2 == 0 {
            return Err(Error::InvalidArgument(
                "N-cycle signs need an odd number of −1".into(),
            ));
        }
        Ok(Self { signs })
    }

    /// All `+1` except a final `−1` on the closing pair `(N−1, 0)`.
    pub fn canonical(n: usize) -> Result<Self> {
        let mut signs = vec![1i8; n];
        if let Some(last) = signs.last_mut() {
            *last = -1;
        }
        Self::new(signs)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Sign pattern after `A_i → −A_i` for the listed observables.
    pub fn flipped(&self, observables: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut flip = vec![false; n];
        for &i in observables {
            if i >= n {
                return Err(Error::InvalidArgument(format!("observable {i} out of range")));
            }
            flip[i] = !flip[i];
        }
        let signs = (0..n)
            .map(|i| if flip[i] ^ flip[(i + 1) % n] { -self.signs[i] } else { self.signs[i] })
            .collect();
        Self::new(signs)
    }
}

/// Coefficient matrix with `λ_{i,i+1} = λ_{i+1,i} = γ_i / 2`.
pub fn ncycle(spec: &NCycleSpec) -> CorrelationProblem {
    let n = spec.len();
    let mut lam = SymMatrix::zeros(n);
    for (i, &g) in spec.signs.iter().enumerate() {
        lam.add_sym(i, (i + 1) % n, 0.5 * g as f64);
    }
    CorrelationProblem { coefficients: lam }
}

/// `N cos(π/N)`.
pub fn ncycle_bound(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("N-cycle bound needs N >= 3 (got {n})")));
    }
    Ok(n as f64 * (PI / n as f64).cos())
}

/// The N-cycle expression as a scenario of `N` binary settings and pairs.
pub fn ncycle_scenario(spec: &NCycleSpec) -> Scenario {
    let n = spec.len();
    let mut sc = Scenario::binary(&format!("ncycle{n}"), n, 2);
    for (i, &g) in spec.signs.iter().enumerate() {
        sc.push_term(ObjectiveTerm::correlator(vec![i, (i + 1) % n], g as f64));
    }
    let mut refs = BTreeMap::new();
    refs.insert("quantum".to_string(), n as f64 * (PI / n as f64).cos());
    refs.insert("nchv".to_string(), n as f64 - 2.0);
    refs.insert("algebraic".to_string(), n as f64);
    sc.reference_values = refs;
    sc
}

/// Leggett-Garg: `⟨M1M2⟩ + ⟨M2M3⟩ − ⟨M1M3⟩`.
pub fn leggett_garg() -> Scenario {
    let mut sc = Scenario::binary("lg", 3, 2);
    sc.push_term(ObjectiveTerm::correlator(vec![0, 1], 1.0));
    sc.push_term(ObjectiveTerm::correlator(vec![1, 2], 1.0));
    sc.push_term(ObjectiveTerm::correlator(vec![0, 2], -1.0));
    sc.reference_values.insert("quantum".into(), 1.5);
    sc.reference_values.insert("nchv".into(), 1.0);
    sc.reference_values.insert("algebraic".into(), 3.0);
    sc
}

/// Labelled integer rays in three dimensions.
#[derive(Clone, Debug)]
pub struct RaySet {
    pub labels: Vec<&'static str>,
    pub rays: Vec<[i64; 3]>,
}

impl RaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Pairs `i < j` of exactly orthogonal rays.
    pub fn orthogonality_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let d: i64 = (0..3).map(|k| self.rays[i][k] * self.rays[j][k]).sum();
                if d == 0 {
                    edges.push((i, j));
                }
            }
        }
        edges
    }
}

/// The thirteen Yu-Oh rays.
pub fn yu_oh_rays() -> RaySet {
    RaySet {
        labels: vec![
            "z1", "z2", "z3", "y1-", "y1+", "y2-", "y2+", "y3-", "y3+", "h0", "h1", "h2", "h3",
        ],
        rays: vec![
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [0, 1, -1],
            [0, 1, 1],
            [1, 0, -1],
            [1, 0, 1],
            [1, -1, 0],
            [1, 1, 0],
            [1, 1, 1],
            [-1, 1, 1],
            [1, -1, 1],
            [1, 1, -1],
        ],
    }
}

/// `2 Σ_i ⟨A_i⟩ − Σ_{(i,j) ∈ E} ⟨A_i A_j⟩_seq` over the orthogonality graph.
pub fn yu_oh() -> Scenario {
    let rays = yu_oh_rays();
    let mut sc = Scenario::binary("yu-oh", rays.len(), 2);
    for i in 0..rays.len() {
        sc.push_term(ObjectiveTerm::correlator(vec![i], 2.0));
    }
    for (i, j) in rays.orthogonality_edges() {
        sc.push_term(ObjectiveTerm::correlator(vec![i, j], -1.0));
    }
    sc.reference_values.insert("nchv".into(), 16.0);
    sc.reference_values.insert("state-independent".into(), 50.0 / 3.0);
    sc.reference_values.insert("algebraic".into(), 50.0);
    sc.reference_values.insert("sequential".into(), 17.794);
    sc
}

/// Guess-your-neighbour's-input with three sequential measurements.
pub fn gyni() -> Scenario {
    let mut sc = Scenario::binary("gyni", 3, 3);
    for (outcomes, settings) in [
        ([0, 0, 0], [0, 0, 0]),
        ([1, 1, 0], [0, 1, 1]),
        ([0, 1, 1], [1, 0, 1]),
        ([1, 0, 1], [1, 1, 0]),
    ] {
        sc.push_term(ObjectiveTerm::probability(settings.to_vec(), outcomes.to_vec(), 1.0));
    }
    sc.reference_values.insert("classical".into(), 1.0);
    sc.reference_values.insert("sequential".into(), 1.0225);
    sc.reference_values.insert("no-signalling".into(), 4.0 / 3.0);
    sc
}

pub const BUILTIN_NAMES: &str = "ncycle3..ncycle12, lg, yu-oh, gyni";

/// Resolves `ncycleN`, `lg`, `yu-oh` and `gyni`.
pub fn builtin(name: &str) -> Result<Scenario> {
    match name {
        "lg" => Ok(leggett_garg()),
        "yu-oh" | "yuoh" => Ok(yu_oh()),
        "gyni" => Ok(gyni()),
        other => {
            let n = other
                .strip_prefix("ncycle")
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|n| (3..=12).contains(n))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown builtin '{other}' (known: {BUILTIN_NAMES})"))
                })?;
            Ok(ncycle_scenario(&NCycleSpec::canonical(n)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!((ncycle_bound(3).unwrap() - 1.5).abs() < 1e-15);
        assert!((ncycle_bound(5).unwrap() - 1.25 * (1.0 + 5f64.sqrt())).abs() < 1e-14);
        assert!((ncycle_bound(4).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(ncycle_bound(2).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(NCycleSpec::new(vec![1, 1, 1]).is_err());
        assert!(NCycleSpec::new(vec![1, -1]).is_err());
        assert!(NCycleSpec::new(vec![1, 2, -1]).is_err());
        assert!(NCycleSpec::new(vec![-1, -1, -1]).is_ok());
    }

    #[test]
    fn flips_preserve_parity() {
        let s = NCycleSpec::canonical(5).unwrap();
        let f = s.flipped(&[0, 2]).unwrap();
        assert_eq!(f.signs.iter().filter(|&&g| g == -1).count() % 2, 1);
        assert_ne!(f, s);
    }

    #[test]
    fn ncycle_coefficients() {
        let p = ncycle(&NCycleSpec::canonical(5).unwrap());
        assert_eq!(p.coefficients.get(0, 1), 0.5);
        assert_eq!(p.coefficients.get(4, 0), -0.5);
        assert_eq!(p.coefficients.get(0, 2), 0.0);
        // Σ λ_ij over the all-ones matrix: four +1 pairs, one −1 pair.
        assert_eq!(p.coefficients.as_slice().iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn yu_oh_graph() {
        let rays = yu_oh_rays();
        let edges = rays.orthogonality_edges();
        assert_eq!(edges.len(), 24);
        let degree = |v: usize| edges.iter().filter(|&&(a, b)| a == v || b == v).count();
        for z in 0..3 {
            assert_eq!(degree(z), 4);
        }
        // Each h-ray is orthogonal to exactly three y-rays and nothing else.
        for h in 9..13 {
            assert_eq!(degree(h), 3);
            assert!(edges.iter().all(|&(a, b)| !(a == h || b == h) || (3..9).contains(&(a + b - h))));
        }
        assert_eq!(yu_oh().objective.len(), 13 + 24);
    }

    #[test]
    fn builtins_resolve() {
        for n in 3..=12 {
            let sc = builtin(&format!("ncycle{n}")).unwrap();
            assert_eq!(sc.num_settings(), n);
            sc.validate().unwrap();
        }
        assert!(builtin("ncycle2").is_err());
        assert!(builtin("ncycle13").is_err());
        assert!(builtin("nope").is_err());
        assert_eq!(builtin("gyni").unwrap().objective.len(), 4);
        builtin("lg").unwrap().validate().unwrap();
    }
}
