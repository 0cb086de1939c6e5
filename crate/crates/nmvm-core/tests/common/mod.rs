//! Shared fixture loading for the integration suites.

#![allow(dead_code)]

use std::path::PathBuf;

use nmvm_core::market::NmvmModel;
use nmvm_core::mixing::MixingLaw;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn load_model(name: &str) -> NmvmModel {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Four-asset daily block with inverse-gamma mixing; infinite mixing
/// variance, finite mean.
pub fn heavy_skew_model() -> NmvmModel {
    load_model("skew_t_4asset.json")
}

/// Same asset block under its Gaussian calibration (Dirac mixing).
pub fn gaussian_model() -> NmvmModel {
    load_model("gaussian_4asset.json")
}

/// Three-asset model with Gamma(2, 2) mixing; every moment finite.
pub fn light_model() -> NmvmModel {
    load_model("light_skew_3asset.json")
}

/// Deterministic pseudo-random model generator for property sweeps.
/// Produces a valid d-asset model with a light mixing law.
pub fn random_model(seed: u64, d: usize) -> NmvmModel {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let r_f = 0.005;
    let mu: Vec<f64> = (0..d).map(|_| r_f + rng.gen_range(-0.02..0.03)).collect();
    let gamma: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.01..0.01)).collect();
    // Sigma = G G^T + eps I keeps the spectrum safely positive
    let g: Vec<f64> = (0..d * d).map(|_| rng.gen_range(-0.1..0.1)).collect();
    let mut sigma = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += g[i * d + k] * g[j * d + k];
            }
            sigma[i * d + j] = s + if i == j { 0.02 } else { 0.0 };
        }
    }
    let law = match seed % 3 {
        0 => MixingLaw::Dirac { point: rng.gen_range(0.5..2.0) },
        1 => MixingLaw::Gamma { shape: rng.gen_range(1.5..6.0), rate: rng.gen_range(0.5..3.0) },
        _ => MixingLaw::InverseGaussian { a: rng.gen_range(0.5..3.0), b: rng.gen_range(0.5..3.0) },
    };
    NmvmModel::new(mu, gamma, sigma, r_f, law).expect("generated model is valid")
}
