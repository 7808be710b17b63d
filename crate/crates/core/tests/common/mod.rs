#![allow(dead_code)]

use cv_metrology::model::ModelConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.0..TAU)
}

/// Uniform `r, x ∈ [0, 2]`, `q ∈ [0, 1]`, every angle uniform in `[0, 2π)`.
pub fn random_config(rng: &mut ChaCha8Rng) -> ModelConfig {
    ModelConfig::new(rng.random_range(0.0..=2.0), rng.random_range(0.0..=2.0))
        .with_q(rng.random_range(0.0..=1.0))
        .with_beta(angle(rng))
        .with_theta(angle(rng))
        .with_phi(angle(rng))
        .with_alpha(angle(rng))
        .with_lambdas(angle(rng), angle(rng))
}

pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= abs + rel * a.abs().max(b.abs())
}
