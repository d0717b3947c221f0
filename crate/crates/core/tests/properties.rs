use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::random_binary_realization;
use tempora::catalog;
use tempora::classical::{algebraic_max, nchv_bound};
use tempora::numerics::{sym_eig, SymMatrix};
use tempora::opalg::{concat_reduce, reverse, words_of_length, Letter, Word};
use tempora::realize::{
    clifford_generators, observables_from_vectors, sequential_correlator, symmetrized_correlator, CMatrix,
    GramVectors,
};
use tempora::regions::{classical_member, quantum_member, LgPoint};
use tempora::sdp::solve_moment_ipm;
use tempora::{moment, ObjectiveTerm, Scenario};

fn alphabet() -> Vec<Letter> {
    // a binary setting, a ternary setting and another binary one
    vec![
        Letter { setting: 0, outcome: 0 },
        Letter { setting: 1, outcome: 0 },
        Letter { setting: 1, outcome: 1 },
        Letter { setting: 2, outcome: 0 },
    ]
}

fn all_words(max_len: usize) -> Vec<Word> {
    let letters = alphabet();
    let mut out = vec![Word::identity(), Word::zero()];
    for len in 1..=max_len {
        let mut raw: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..len {
            raw = raw
                .into_iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut v = w.clone();
                        v.push(l);
                        v
                    })
                })
                .collect();
        }
        out.extend(raw.into_iter().map(Word::from_letters));
    }
    out
}

#[test]
fn word_reduction_is_confluent_to_length_three() {
    let words = all_words(3);
    for a in &words {
        for b in &words {
            let ab = concat_reduce(a, b);
            assert_eq!(reverse(&ab), concat_reduce(&reverse(b), &reverse(a)));
            for c in &words {
                assert_eq!(concat_reduce(&ab, c), concat_reduce(a, &concat_reduce(b, c)));
            }
        }
    }
}

#[test]
fn raw_products_reduce_independently_of_grouping() {
    let letters = alphabet();
    for len in 1..=3 {
        for w in words_of_length(&letters, len) {
            let folded = w
                .letters()
                .iter()
                .fold(Word::identity(), |acc, &l| concat_reduce(&acc, &Word::letter(l)));
            assert_eq!(folded, w);
            assert!(!w.letters().windows(2).any(|p| p[0].setting == p[1].setting));
        }
    }
    let e = alphabet();
    assert!(Word::from_letters([e[1], e[2]]).is_zero());
    assert_eq!(Word::from_letters([e[0], e[0], e[3]]), Word::from_letters([e[0], e[3]]));
}

fn unit_vectors(d: usize, count: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), count)
        .prop_filter("non-degenerate", |vs| vs.iter().all(|v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3))
        .prop_map(|vs| {
            vs.into_iter()
                .map(|v| {
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    v.into_iter().map(|x| x / n).collect()
                })
                .collect()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_observables_anticommute_to_inner_products(
        vs in (1usize..=6).prop_flat_map(|d| unit_vectors(d, 3))
    ) {
        let g = GramVectors::new(vs.clone()).unwrap();
        let r = observables_from_vectors(&g).unwrap();
        let n = r.dimension;
        for i in 0..vs.len() {
            for j in 0..vs.len() {
                let (a, b) = (r.observable(i).unwrap(), r.observable(j).unwrap());
                let mut anti = a.mul(&b);
                anti.add_scaled(1.0, &b.mul(&a));
                let dot: f64 = vs[i].iter().zip(&vs[j]).map(|(x, y)| x * y).sum();
                let expect = CMatrix::identity(n).scaled(2.0 * dot);
                prop_assert!(anti.sub(&expect).max_abs() < 1e-10);
                let seq = sequential_correlator(&r, &[i, j]).unwrap();
                prop_assert!((seq - dot).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn elliptope_membership_matches_minimum_eigenvalue(
        q12 in -1.0f64..=1.0, q13 in -1.0f64..=1.0, q23 in -1.0f64..=1.0
    ) {
        let p = LgPoint::new(q12, q13, q23).unwrap();
        let m = SymMatrix::from_rows(&[
            vec![1.0, q12, q13],
            vec![q12, 1.0, q23],
            vec![q13, q23, 1.0],
        ]).unwrap();
        let min = m.min_eigenvalue();
        // Skip the thin shell where determinant and eigenvalue tolerances disagree.
        prop_assume!(min.abs() > 1e-6);
        prop_assert_eq!(quantum_member(&p, 1e-9), min > 0.0);
        if classical_member(&p, 1e-9) {
            prop_assert!(quantum_member(&p, 1e-9));
        }
    }

    #[test]
    fn scenario_json_round_trip(
        counts in prop::collection::vec(2usize..=4, 1..=4),
        len in 1usize..=3,
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..=5),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Scenario::with_outcomes("random", &counts, len);
        for c in coeffs {
            let k = rng.gen_range(1..=len);
            let settings: Vec<usize> = (0..k).map(|_| rng.gen_range(0..counts.len())).collect();
            let outcomes: Vec<usize> = settings.iter().map(|&st| rng.gen_range(0..counts[st])).collect();
            s.push_term(ObjectiveTerm::probability(settings, outcomes, c));
        }
        s.reference_values.insert("note".into(), 1.25);
        prop_assert!(s.validate().is_ok());
        let back = Scenario::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn cycle_adjacency_spectrum() {
    for n in 3..=12 {
        let m = SymMatrix::from_fn(n, |i, j| if (i + 1) % n == j || (j + 1) % n == i { -1.0 } else { 0.0 });
        let eig = sym_eig(&m).unwrap();
        let mut expect: Vec<f64> = (0..n)
            .map(|j| -2.0 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (got, want) in eig.values.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-10, "N={n}: {got} vs {want}");
        }
    }
}

#[test]
fn deterministic_generators_cover_each_dimension() {
    for d in 1..=6 {
        let g = clifford_generators(d).unwrap();
        assert_eq!(g.len(), d);
        assert_eq!(g[0].n, 1 << d.div_ceil(2));
    }
}

#[test]
fn two_point_sequential_correlators_are_symmetrized_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let r = random_binary_realization(&mut rng, 3);
        r.validate(1e-10).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let ij = sequential_correlator(&r, &[i, j]).unwrap();
                let ji = sequential_correlator(&r, &[j, i]).unwrap();
                assert!((ij - ji).abs() < 1e-10);
                assert!((ij - symmetrized_correlator(&r, i, j).unwrap()).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn random_objectives_sit_between_classical_and_memory_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..12 {
        let settings = rng.gen_range(2..=3);
        let mut s = Scenario::binary(&format!("random{trial}"), settings, 2);
        for _ in 0..rng.gen_range(2..=5) {
            let len = rng.gen_range(1..=2);
            let seq: Vec<usize> = (0..len).map(|_| rng.gen_range(0..settings)).collect();
            let out: Vec<usize> = (0..len).map(|_| rng.gen_range(0..2)).collect();
            s.push_term(ObjectiveTerm::probability(seq, out, rng.gen_range(-1.0..1.0)));
        }
        let p = moment::build_problem(&s).unwrap();
        let q = solve_moment_ipm(&p, 1e-8).unwrap().primal_value;
        let c = nchv_bound(&s).unwrap();
        let a = algebraic_max(&s).unwrap();
        assert!(c <= q + 1e-6 && q <= a + 1e-6, "{}: {c} <= {q} <= {a}", s.name);
    }
}

#[test]
fn ncycle_classical_value_is_n_minus_two() {
    for n in 3..=8 {
        let s = catalog::ncycle_scenario(&catalog::NCycleSpec::canonical(n).unwrap());
        assert!((nchv_bound(&s).unwrap() - (n as f64 - 2.0)).abs() < 1e-12);
    }
}
