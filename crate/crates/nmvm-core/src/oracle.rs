//! Sampling-based verification: Monte-Carlo expected utility for arbitrary
//! portfolios, the uniform-box random search, CE inversion, and descriptive
//! statistics. Everything is deterministic per seed and independent of the
//! thread count: one factor stream is materialized up front and partial sums
//! are reduced in fixed chunk order.

use crate::error::{Error, Result};
use crate::market::NmvmModel;
use crate::utility::UtilitySpec;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Draws with |U| above this are dropped from the average and counted.
pub const DEFAULT_CLIP: f64 = 1e15;

const CHUNK: usize = 65536;

#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
    /// Number of draws dropped by the clip threshold; nonzero means the
    /// estimate cannot be trusted (the true expectation may be infinite).
    pub clipped: usize,
}

struct Factors {
    z: Vec<f64>,
    u: Vec<f64>,
    d: usize,
}

fn materialize(model: &NmvmModel, seed: u64, n: usize) -> Factors {
    let (z, u) = model.sample_factors(seed, n);
    Factors {
        z,
        u,
        d: model.d(),
    }
}

/// Mean and standard error of U(W(x)) over the factor stream.
fn mc_over_factors(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    x: &[f64],
    f: &Factors,
    seed: u64,
) -> McReport {
    let base = w0 * (1.0 + model.r_f());
    let a0: f64 = x
        .iter()
        .zip(model.mu())
        .map(|(&xi, &mi)| xi * (mi - model.r_f()))
        .sum();
    let a1: f64 = x.iter().zip(model.gamma()).map(|(&xi, &gi)| xi * gi).sum();
    let n = f.z.len();
    let partials: Vec<(f64, f64, usize)> = f
        .z
        .par_chunks(CHUNK)
        .zip(f.u.par_chunks(CHUNK * f.d))
        .map(|(zc, uc)| {
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            let mut clipped = 0usize;
            for (i, &zi) in zc.iter().enumerate() {
                let row = &uc[i * f.d..(i + 1) * f.d];
                let xu: f64 = x.iter().zip(row).map(|(&xi, &ui)| xi * ui).sum();
                let w = base + w0 * (a0 + a1 * zi + zi.sqrt() * xu);
                let u = spec.eval(w);
                if !u.is_finite() || u.abs() > DEFAULT_CLIP {
                    clipped += 1;
                } else {
                    sum += u;
                    sumsq += u * u;
                }
            }
            (sum, sumsq, clipped)
        })
        .collect();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut clipped = 0usize;
    for (s, q, c) in partials {
        sum += s;
        sumsq += q;
        clipped += c;
    }
    let kept = n - clipped;
    if kept == 0 {
        return McReport {
            estimate: f64::NAN,
            std_error: f64::NAN,
            n,
            seed,
            clipped,
        };
    }
    let estimate = sum / kept as f64;
    let var = ((sumsq - kept as f64 * estimate * estimate) / (kept.max(2) - 1) as f64).max(0.0);
    McReport {
        estimate,
        std_error: (var / kept as f64).sqrt(),
        n,
        seed,
        clipped,
    }
}

pub fn mc_expected_utility(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    x: &[f64],
    n: usize,
    seed: u64,
) -> Result<McReport> {
    spec.validate()?;
    if n < 1000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 1000 samples for a standard error, got {n}"
        )));
    }
    if x.len() != model.d() {
        return Err(Error::DimensionMismatch(format!(
            "portfolio has {} entries for {} assets",
            x.len(),
            model.d()
        )));
    }
    let f = materialize(model, seed, n);
    Ok(mc_over_factors(model, spec, w0, x, &f, seed))
}

/// Uniform box search around `center`: coordinate i is drawn from
/// [-2 c_i, 4 c_i] (orientation flipped for negative c_i). All candidates
/// share one factor stream, so their estimates are directly comparable and
/// the best estimate is monotone in the candidate count.
pub fn random_search_optimal(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    center: &[f64],
    n_candidates: usize,
    mc_n: usize,
    seed: u64,
) -> Result<(Vec<f64>, McReport)> {
    spec.validate()?;
    if center.len() != model.d() {
        return Err(Error::DimensionMismatch(format!(
            "center has {} entries for {} assets",
            center.len(),
            model.d()
        )));
    }
    if center.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter("center must be finite".into()));
    }
    if n_candidates == 0 {
        return Err(Error::InvalidParameter("need at least one candidate".into()));
    }
    // candidate stream is separate from the factor stream so that changing
    // mc_n never changes which candidates are drawn
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let boxes: Vec<Uniform<f64>> = center
        .iter()
        .map(|&c| {
            let (lo, hi) = if c >= 0.0 { (-2.0 * c, 4.0 * c) } else { (4.0 * c, -2.0 * c) };
            Uniform::new_inclusive(lo, hi)
        })
        .collect();
    let candidates: Vec<Vec<f64>> = (0..n_candidates)
        .map(|_| boxes.iter().map(|b| b.sample(&mut rng)).collect())
        .collect();

    let f = materialize(model, seed, mc_n);
    let estimates: Vec<f64> = candidates
        .par_iter()
        .map(|x| mc_over_factors(model, spec, w0, x, &f, seed).estimate)
        .collect();
    // NaN (fully clipped) never wins; ties keep the earliest candidate
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &e) in estimates.iter().enumerate() {
        if e > best_val {
            best_val = e;
            best = i;
        }
    }
    let report = mc_over_factors(model, spec, w0, &candidates[best], &f, seed);
    Ok((candidates[best].clone(), report))
}

/// w with U(w) = expected_utility; errors when the target is out of range.
pub fn certainty_equivalent(spec: UtilitySpec, expected_utility: f64) -> Result<f64> {
    spec.certainty_equivalent(expected_utility)
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub variance: f64,
    /// None when the column is constant (standardized moments undefined).
    pub skewness: Option<f64>,
    /// Raw (non-excess) kurtosis: ~3 for Gaussian data.
    pub kurtosis: Option<f64>,
}

/// Per-column sample moments of a row-major n x d matrix. Variance is the
/// unbiased estimator; skewness and kurtosis standardize the biased central
/// moments.
pub fn descriptive_stats(data: &[f64], d: usize) -> Result<Vec<ColumnStats>> {
    if d == 0 || data.len() % d != 0 {
        return Err(Error::DimensionMismatch(format!(
            "{} values do not form rows of {} columns",
            data.len(),
            d
        )));
    }
    let n = data.len() / d;
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 rows for fourth moments, got {n}"
        )));
    }
    let nf = n as f64;
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let col = || data.iter().skip(j).step_by(d);
        let mean = col().sum::<f64>() / nf;
        let mut m2 = 0.0;
        let mut m3 = 0.0;
        let mut m4 = 0.0;
        for &v in col() {
            let e = v - mean;
            m2 += e * e;
            m3 += e * e * e;
            m4 += e * e * e * e;
        }
        let variance = m2 / (nf - 1.0);
        m2 /= nf;
        m3 /= nf;
        m4 /= nf;
        let (skewness, kurtosis) = if m2 > 0.0 {
            (Some(m3 / m2.powf(1.5)), Some(m4 / (m2 * m2)))
        } else {
            (None, None)
        };
        out.push(ColumnStats {
            mean,
            variance,
            skewness,
            kurtosis,
        });
    }
    Ok(out)
}
