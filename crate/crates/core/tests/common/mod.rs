// SPDX-License-Identifier: MIT OR Apache-2.0

#![allow(dead_code)]

use agehopf::model::{assumption_report, reduced_coeffs, ModelParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn figure1() -> ModelParams<f64> {
    ModelParams::new(0.6, 0.2, 0.81)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rejection-sample parameter sets that satisfy all five stability
/// assumptions (which needs η + μ > 1).
pub fn admissible(rng: &mut ChaCha8Rng, count: usize) -> Vec<ModelParams<f64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mu: f64 = rng.gen_range(0.02..0.6);
        let eta = rng.gen_range((1.0 - mu + 0.005).min(0.98)..0.99);
        let lambda = rng.gen_range(mu + 0.02..3.0);
        let p = ModelParams::new(lambda, mu, eta);
        if let Ok(c) = reduced_coeffs(&p) {
            if assumption_report(&c).pass {
                out.push(p);
            }
        }
    }
    out
}

/// Derivative of an analytic function by the Cauchy integral on a circle
/// of radius `r` with `n` nodes: spectrally accurate and independent of
/// any closed-form derivative.
pub fn cauchy_derivative(
    f: impl Fn(num_complex::Complex64) -> num_complex::Complex64,
    z: num_complex::Complex64,
    r: f64,
    n: usize,
) -> num_complex::Complex64 {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
        acc += f(z + w * r) / w;
    }
    acc / (n as f64 * r)
}
