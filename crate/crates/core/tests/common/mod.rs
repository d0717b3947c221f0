use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tempora::realize::CMatrix;
use tempora::QuantumRealization;

/// Random unit vector in ℂⁿ as (re, im).
pub fn random_state_vector(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let re: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let im: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = re.iter().chain(&im).map(|x| x * x).sum::<f64>().sqrt();
    (re.iter().map(|x| x / norm).collect(), im.iter().map(|x| x / norm).collect())
}

/// Orthonormal basis of ℂⁿ by Gram-Schmidt on random vectors.
fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut basis: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    while basis.len() < n {
        let (mut re, mut im) = random_state_vector(rng, n);
        for (qr, qi) in &basis {
            // ⟨q, v⟩ = Σ conj(q) v
            let dr: f64 = (0..n).map(|k| qr[k] * re[k] + qi[k] * im[k]).sum();
            let di: f64 = (0..n).map(|k| qr[k] * im[k] - qi[k] * re[k]).sum();
            for k in 0..n {
                re[k] -= dr * qr[k] - di * qi[k];
                im[k] -= dr * qi[k] + di * qr[k];
            }
        }
        let norm = re.iter().chain(&im).map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push((re.iter().map(|x| x / norm).collect(), im.iter().map(|x| x / norm).collect()));
        }
    }
    basis
}

pub fn random_binary_realization(rng: &mut ChaCha8Rng, settings: usize) -> QuantumRealization {
    let n = rng.gen_range(2..=4);
    let projectors = (0..settings)
        .map(|_| {
            let basis = random_basis(rng, n);
            let rank = rng.gen_range(0..=n);
            let mut p0 = CMatrix::zeros(n);
            for (re, im) in &basis[..rank] {
                p0.add_scaled(1.0, &CMatrix::outer(re, im));
            }
            let p1 = CMatrix::identity(n).sub(&p0);
            vec![p0, p1]
        })
        .collect();
    let mut state = CMatrix::zeros(n);
    for _ in 0..rng.gen_range(1..=n) {
        let (re, im) = random_state_vector(rng, n);
        state.add_scaled(rng.gen_range(0.1..1.0), &CMatrix::outer(&re, &im));
    }
    let tr = state.trace_re();
    QuantumRealization {
        dimension: n,
        state: state.scaled(1.0 / tr),
        projectors,
        metadata: None,
    }
}

