#![allow(dead_code)]

use ness_core::linalg::{self, CMat};
use ness_core::model::DIM;
use ness_core::{analytic_eigensystem, c64, BathSpec, DensityMatrix, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters away from the ε = J resonance.
pub fn random_params(rng: &mut impl Rng, lo: f64, hi: f64) -> ModelParams {
    loop {
        let p = ModelParams::new(
            rng.random_range(lo..hi),
            rng.random_range(lo..hi),
            rng.random_range(lo..hi),
        )
        .unwrap();
        if (p.epsilon() - p.j_total()).abs() > 0.05 {
            return p;
        }
    }
}

pub fn random_baths(rng: &mut impl Rng) -> BathSpec {
    BathSpec::new(
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.02..0.2),
        rng.random_range(0.02..0.2),
    )
    .unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| {
        c64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng) -> CMat {
    let a = random_matrix(rng, DIM);
    linalg::hermitian_part(&a)
}

pub fn random_density(rng: &mut impl Rng) -> DensityMatrix {
    let a = random_matrix(rng, DIM);
    let p = &a * a.adjoint();
    let tr = linalg::trace(&p).re;
    let m = linalg::hermitian_part(&linalg::scale(linalg::real(1.0 / tr), &p));
    DensityMatrix::new(m).unwrap()
}

/// Σ e^{−λ_i/T} |s_i⟩⟨s_i| / Z from the closed-form eigensystem.
pub fn gibbs_oracle(params: &ModelParams, temperature: f64) -> CMat {
    let eig = analytic_eigensystem(params);
    let ground = eig.values().into_iter().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = eig
        .values()
        .iter()
        .map(|l| (-(l - ground) / temperature).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let mut out = CMat::zeros(DIM, DIM);
    for (i, w) in weights.iter().enumerate() {
        out += linalg::scale(linalg::real(w / z), &eig.transition(i + 1, i + 1));
    }
    out
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: {actual} vs {expected} (tol {tol:e})"
    );
}
