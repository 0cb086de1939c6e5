//! Mixing laws for the normal mean-variance mixture: exact Laplace
//! transforms with their critical values, moments, deterministic quadrature
//! rules for E f(Z), and seeded sampling.
//!
//! `laplace` treats +infinity as an in-band value, never an error: below the
//! critical value the transform IS infinite and callers branch on that.

use crate::error::{Error, Result};
use crate::quad::{self, QuadRule};
use crate::special::{ln_bessel_k, ln_gamma};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Distribution of the mixing variable Z > 0.
///
/// Parameter conventions: `Gamma` carries (shape, rate) with density
/// proportional to z^{shape-1} e^{-rate z}; `InverseGamma` carries
/// (shape, scale) with density proportional to z^{-shape-1} e^{-scale/z};
/// `InverseGaussian` and `Gig` carry the (a, b) of the density kernel
/// z^{lambda-1} e^{-(a/z + b z)/2}, with lambda fixed at -1/2 for
/// `InverseGaussian`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum MixingLaw {
    Dirac { point: f64 },
    Gamma { shape: f64, rate: f64 },
    InverseGamma { shape: f64, scale: f64 },
    InverseGaussian { a: f64, b: f64 },
    Gig { lambda: f64, a: f64, b: f64 },
}

/// Infimum of the finiteness domain of the Laplace transform, together with
/// whether the transform is still finite exactly at that point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValue {
    pub s_hat: f64,
    pub finite_at_s_hat: bool,
}

/// Exact moments, +infinity where the moment does not exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub sqrt_mean: f64,
}

impl MixingLaw {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let fin = |v: f64| v.is_finite();
        match *self {
            MixingLaw::Dirac { point } => {
                if !fin(point) || point <= 0.0 {
                    return bad(format!("dirac point must be positive, got {point}"));
                }
            }
            MixingLaw::Gamma { shape, rate } => {
                if !fin(shape) || !fin(rate) || shape <= 0.0 || rate <= 0.0 {
                    return bad(format!(
                        "gamma requires shape > 0 and rate > 0, got ({shape}, {rate})"
                    ));
                }
            }
            MixingLaw::InverseGamma { shape, scale } => {
                if !fin(shape) || !fin(scale) || shape <= 0.0 || scale <= 0.0 {
                    return bad(format!(
                        "inverse gamma requires shape > 0 and scale > 0, got ({shape}, {scale})"
                    ));
                }
            }
            MixingLaw::InverseGaussian { a, b } => {
                if !fin(a) || !fin(b) || a <= 0.0 || b <= 0.0 {
                    return bad(format!(
                        "inverse gaussian requires a > 0 and b > 0, got ({a}, {b})"
                    ));
                }
            }
            MixingLaw::Gig { lambda, a, b } => {
                if !fin(lambda) || !fin(a) || !fin(b) || a < 0.0 || b < 0.0 {
                    return bad(format!(
                        "gig parameters out of range: lambda={lambda}, a={a}, b={b}"
                    ));
                }
                // integrability of z^{lambda-1} e^{-(a/z+bz)/2} at 0 and infinity
                let ok = if lambda > 0.0 {
                    b > 0.0
                } else if lambda == 0.0 {
                    a > 0.0 && b > 0.0
                } else {
                    a > 0.0
                };
                if !ok {
                    return bad(format!(
                        "gig admissibility violated for lambda={lambda}: needs a > 0 when \
                         lambda <= 0 and b > 0 when lambda >= 0 (got a={a}, b={b})"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn critical_value(&self) -> CriticalValue {
        match *self {
            MixingLaw::Dirac { .. } => CriticalValue {
                s_hat: f64::NEG_INFINITY,
                finite_at_s_hat: true,
            },
            MixingLaw::Gamma { rate, .. } => CriticalValue {
                s_hat: -rate,
                finite_at_s_hat: false,
            },
            MixingLaw::InverseGamma { .. } => CriticalValue {
                s_hat: 0.0,
                finite_at_s_hat: true,
            },
            // GIG with b > 0: transform carries K_lambda(sqrt(a(b+2s))); as
            // s -> -b/2 the argument -> 0 where K_lambda diverges like
            // x^{-|lambda|} (log for lambda = 0). The prefactor
            // (b/(b+2s))^{lambda/2} cancels that divergence exactly when
            // lambda < 0, leaving the finite limit used in laplace below.
            MixingLaw::InverseGaussian { b, .. } => CriticalValue {
                s_hat: -b / 2.0,
                finite_at_s_hat: true,
            },
            MixingLaw::Gig { lambda, a, b } => {
                if a == 0.0 {
                    CriticalValue {
                        s_hat: -b / 2.0,
                        finite_at_s_hat: false,
                    }
                } else if b == 0.0 {
                    CriticalValue {
                        s_hat: 0.0,
                        finite_at_s_hat: true,
                    }
                } else {
                    CriticalValue {
                        s_hat: -b / 2.0,
                        finite_at_s_hat: lambda < 0.0,
                    }
                }
            }
        }
    }

    /// ln E e^{-sZ}; +infinity below (or, where applicable, at) the critical
    /// value.
    pub fn log_laplace(&self, s: f64) -> f64 {
        match *self {
            MixingLaw::Dirac { point } => -s * point,
            MixingLaw::Gamma { shape, rate } => log_laplace_gamma(shape, rate, s),
            MixingLaw::InverseGamma { shape, scale } => log_laplace_inv_gamma(shape, scale, s),
            MixingLaw::InverseGaussian { a, b } => {
                let t = b + 2.0 * s;
                if t < 0.0 {
                    f64::INFINITY
                } else {
                    (a * b).sqrt() - (a * t).sqrt()
                }
            }
            MixingLaw::Gig { lambda, a, b } => {
                if a == 0.0 {
                    return log_laplace_gamma(lambda, b / 2.0, s);
                }
                if b == 0.0 {
                    return log_laplace_inv_gamma(-lambda, a / 2.0, s);
                }
                let t = b + 2.0 * s;
                let k_ab = ln_bessel_k(lambda, (a * b).sqrt());
                if t > 0.0 {
                    0.5 * lambda * (b.ln() - t.ln()) + ln_bessel_k(lambda, (a * t).sqrt()) - k_ab
                } else if t == 0.0 && lambda < 0.0 {
                    // limit of the ratio as the Bessel argument goes to 0
                    0.5 * lambda * (a * b).ln() + (-lambda - 1.0) * std::f64::consts::LN_2
                        + ln_gamma(-lambda)
                        - k_ab
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// E e^{-sZ} as an extended real.
    pub fn laplace(&self, s: f64) -> f64 {
        let ll = self.log_laplace(s);
        if ll == f64::INFINITY {
            f64::INFINITY
        } else {
            ll.exp()
        }
    }

    /// E Z^r for real r; +infinity when the moment diverges.
    pub fn moment(&self, r: f64) -> f64 {
        if !self.moment_finite(r) {
            return f64::INFINITY;
        }
        match *self {
            MixingLaw::Dirac { point } => point.powf(r),
            MixingLaw::Gamma { shape, rate } => {
                (ln_gamma(shape + r) - ln_gamma(shape) - r * rate.ln()).exp()
            }
            MixingLaw::InverseGamma { shape, scale } => {
                (ln_gamma(shape - r) - ln_gamma(shape) + r * scale.ln()).exp()
            }
            MixingLaw::InverseGaussian { a, b } => gig_moment(-0.5, a, b, r),
            MixingLaw::Gig { lambda, a, b } => {
                if a == 0.0 {
                    MixingLaw::Gamma {
                        shape: lambda,
                        rate: b / 2.0,
                    }
                    .moment(r)
                } else if b == 0.0 {
                    MixingLaw::InverseGamma {
                        shape: -lambda,
                        scale: a / 2.0,
                    }
                    .moment(r)
                } else {
                    gig_moment(lambda, a, b, r)
                }
            }
        }
    }

    /// Whether E Z^p is finite (p may be negative).
    pub fn moment_finite(&self, p: f64) -> bool {
        match *self {
            MixingLaw::Dirac { .. } => true,
            MixingLaw::Gamma { shape, .. } => p > -shape,
            MixingLaw::InverseGamma { shape, .. } => p < shape,
            MixingLaw::InverseGaussian { .. } => true,
            MixingLaw::Gig { lambda, a, b } => {
                if a == 0.0 {
                    p > -lambda
                } else if b == 0.0 {
                    p < -lambda
                } else {
                    true
                }
            }
        }
    }

    pub fn moments(&self) -> Moments {
        let m1 = self.moment(1.0);
        let m2 = self.moment(2.0);
        let variance = if m2.is_finite() && m1.is_finite() {
            (m2 - m1 * m1).max(0.0)
        } else {
            f64::INFINITY
        };
        Moments {
            mean: m1,
            variance,
            sqrt_mean: self.moment(0.5),
        }
    }

    /// Deterministic rule approximating E f(Z). `n` is a node-count hint;
    /// heavy-tailed families use a two-piece composite of about 2n nodes.
    ///
    /// The inverse-gamma tail uses the power map z = z0 t^{-1/p},
    /// p = shape - 1: the transformed integrand stays smooth for integrands
    /// growing up to ~z, which is exactly the range the finiteness pre-check
    /// admits with margin.
    pub fn z_rule(&self, n: usize) -> QuadRule {
        let n = n.max(4);
        match *self {
            MixingLaw::Dirac { point } => QuadRule {
                nodes: vec![point],
                weights: vec![1.0],
            },
            MixingLaw::Gamma { shape, rate } => {
                let base = quad::gen_laguerre(n, shape - 1.0);
                QuadRule {
                    nodes: base.nodes.iter().map(|x| x / rate).collect(),
                    weights: base.weights,
                }
            }
            MixingLaw::InverseGamma { shape, scale } => inv_gamma_rule(shape, scale, n),
            MixingLaw::InverseGaussian { a, b } => gig_rule(-0.5, a, b, n),
            MixingLaw::Gig { lambda, a, b } => {
                if a == 0.0 {
                    MixingLaw::Gamma {
                        shape: lambda,
                        rate: b / 2.0,
                    }
                    .z_rule(n)
                } else if b == 0.0 {
                    MixingLaw::InverseGamma {
                        shape: -lambda,
                        scale: a / 2.0,
                    }
                    .z_rule(n)
                } else {
                    gig_rule(lambda, a, b, n)
                }
            }
        }
    }

    /// One draw from the law. Prefer `sampler()` in loops; this rebuilds the
    /// sampler each call.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().expect("law must be valid").draw(rng)
    }

    pub fn sampler(&self) -> Result<LawSampler> {
        self.validate()?;
        LawSampler::new(*self)
    }

    /// n i.i.d. draws, reproducible from the seed.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampler = self.sampler().expect("law must be valid");
        (0..n).map(|_| sampler.draw(&mut rng)).collect()
    }
}

fn log_laplace_gamma(shape: f64, rate: f64, s: f64) -> f64 {
    if s <= -rate {
        f64::INFINITY
    } else {
        -shape * (1.0 + s / rate).ln()
    }
}

fn log_laplace_inv_gamma(shape: f64, scale: f64, s: f64) -> f64 {
    if s < 0.0 {
        f64::INFINITY
    } else if s == 0.0 {
        0.0
    } else {
        std::f64::consts::LN_2 - ln_gamma(shape) + 0.5 * shape * (scale * s).ln()
            + ln_bessel_k(shape, 2.0 * (scale * s).sqrt())
    }
}

fn gig_moment(lambda: f64, a: f64, b: f64, r: f64) -> f64 {
    let sab = (a * b).sqrt();
    (0.5 * r * (a.ln() - b.ln()) + ln_bessel_k(lambda + r, sab) - ln_bessel_k(lambda, sab)).exp()
}

/// ln of the inverse-gamma density.
fn ln_f_inv_gamma(shape: f64, scale: f64, z: f64) -> f64 {
    shape * scale.ln() - ln_gamma(shape) - (shape + 1.0) * z.ln() - scale / z
}

fn inv_gamma_rule(shape: f64, scale: f64, n: usize) -> QuadRule {
    let z0 = 25.0 * scale / (shape - 1.0).max(0.1);
    let base = quad::legendre01(n);
    let mut nodes = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for (&t, &w) in base.nodes.iter().zip(&base.weights) {
        let z = z0 * t;
        nodes.push(z);
        weights.push(w * z0 * ln_f_inv_gamma(shape, scale, z).exp());
    }
    // tail z in (z0, inf) via z = z0 t^{-1/p}: t traverses (0,1], reversed so
    // nodes stay ascending
    let p = (shape - 1.0).max(0.3);
    for (&t, &w) in base.nodes.iter().rev().zip(base.weights.iter().rev()) {
        let z = z0 * t.powf(-1.0 / p);
        let jac = z0 / p * t.powf(-1.0 / p - 1.0);
        nodes.push(z);
        weights.push(w * jac * ln_f_inv_gamma(shape, scale, z).exp());
    }
    QuadRule { nodes, weights }
}

fn gig_rule(lambda: f64, a: f64, b: f64, n: usize) -> QuadRule {
    // z = s t/(1-t) maps (0,1) onto (0,inf); both density tails vanish to
    // all orders under this map, so plain Legendre converges fast
    let s = (a / b).sqrt();
    let ln_c = 0.5 * lambda * (b.ln() - a.ln())
        - std::f64::consts::LN_2
        - ln_bessel_k(lambda, (a * b).sqrt());
    let ln_f = |z: f64| ln_c + (lambda - 1.0) * z.ln() - 0.5 * (a / z + b * z);
    let base = quad::legendre01(2 * n);
    let mut nodes = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    for (&t, &w) in base.nodes.iter().zip(&base.weights) {
        let z = s * t / (1.0 - t);
        let jac = s / ((1.0 - t) * (1.0 - t));
        nodes.push(z);
        weights.push(w * jac * ln_f(z).exp());
    }
    QuadRule { nodes, weights }
}

/// Prebuilt sampler for one law; immutable and cheap to reuse.
pub struct LawSampler {
    kind: SamplerKind,
}

enum SamplerKind {
    Dirac(f64),
    /// Gamma(shape, rate), drawn via rand_distr (Marsaglia-Tsang).
    Gamma(rand_distr::Gamma<f64>, f64),
    /// scale / Gamma(shape, 1)
    InverseGamma(rand_distr::Gamma<f64>, f64),
    /// mean mu = sqrt(a/b), shape lam = a (transform method)
    InverseGaussian {
        mu: f64,
        lam: f64,
    },
    /// Ratio-of-uniforms with mode shift for the kernel
    /// z^{lambda-1} e^{-(a/z+bz)/2} (lambda >= 0 after inversion).
    Gig {
        lambda: f64,
        a: f64,
        b: f64,
        invert: bool,
        mode: f64,
        ln_h_mode: f64,
        v_lo: f64,
        v_hi: f64,
    },
}

impl LawSampler {
    fn new(law: MixingLaw) -> Result<Self> {
        let kind = match law {
            MixingLaw::Dirac { point } => SamplerKind::Dirac(point),
            MixingLaw::Gamma { shape, rate } => SamplerKind::Gamma(
                rand_distr::Gamma::new(shape, 1.0).map_err(sample_err)?,
                rate,
            ),
            MixingLaw::InverseGamma { shape, scale } => SamplerKind::InverseGamma(
                rand_distr::Gamma::new(shape, 1.0).map_err(sample_err)?,
                scale,
            ),
            MixingLaw::InverseGaussian { a, b } => SamplerKind::InverseGaussian {
                mu: (a / b).sqrt(),
                lam: a,
            },
            MixingLaw::Gig { lambda, a, b } => {
                if a == 0.0 {
                    return Self::new(MixingLaw::Gamma {
                        shape: lambda,
                        rate: b / 2.0,
                    });
                }
                if b == 0.0 {
                    return Self::new(MixingLaw::InverseGamma {
                        shape: -lambda,
                        scale: a / 2.0,
                    });
                }
                // canonicalize to lambda >= 0: 1/Z swaps (lambda,a,b) ->
                // (-lambda,b,a)
                let (lam, aa, bb, invert) = if lambda < 0.0 {
                    (-lambda, b, a, true)
                } else {
                    (lambda, a, b, false)
                };
                build_gig_sampler(lam, aa, bb, invert)?
            }
        };
        Ok(LawSampler { kind })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            SamplerKind::Dirac(z) => z,
            SamplerKind::Gamma(ref g, rate) => g.sample(rng) / rate,
            SamplerKind::InverseGamma(ref g, scale) => {
                let mut x = g.sample(rng);
                while x == 0.0 {
                    x = g.sample(rng);
                }
                scale / x
            }
            SamplerKind::InverseGaussian { mu, lam } => {
                let nu: f64 = StandardNormal.sample(rng);
                let y = nu * nu;
                let x = mu + mu * mu * y / (2.0 * lam)
                    - mu / (2.0 * lam) * (4.0 * mu * lam * y + mu * mu * y * y).sqrt();
                let u: f64 = rng.gen();
                if u <= mu / (mu + x) {
                    x
                } else {
                    mu * mu / x
                }
            }
            SamplerKind::Gig {
                lambda,
                a,
                b,
                invert,
                mode,
                ln_h_mode,
                v_lo,
                v_hi,
            } => {
                let ln_h = |z: f64| (lambda - 1.0) * z.ln() - 0.5 * (a / z + b * z);
                loop {
                    let u: f64 = rng.gen();
                    if u == 0.0 {
                        continue;
                    }
                    let v = v_lo + (v_hi - v_lo) * rng.gen::<f64>();
                    let z = mode + v / u;
                    if z > 0.0 && 2.0 * u.ln() <= ln_h(z) - ln_h_mode {
                        return if invert { 1.0 / z } else { z };
                    }
                }
            }
        }
    }
}

fn sample_err<E: std::fmt::Display>(e: E) -> Error {
    Error::InvalidParameter(format!("sampler construction failed: {e}"))
}

fn build_gig_sampler(lambda: f64, a: f64, b: f64, invert: bool) -> Result<SamplerKind> {
    // mode of h(z) = z^{lambda-1} e^{-(a/z+bz)/2}: positive root of
    // (b/2) z^2 - (lambda-1) z - a/2 = 0
    let lm1 = lambda - 1.0;
    let mode = (lm1 + (lm1 * lm1 + a * b).sqrt()) / b;
    let ln_h = move |z: f64| lm1 * z.ln() - 0.5 * (a / z + b * z);
    let ln_h_mode = ln_h(mode);
    // envelope bounds of g(z) = (z - mode) sqrt(h(z)/h(mode)) on each side
    let g = move |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        (z - mode) * (0.5 * (ln_h(z) - ln_h_mode)).exp()
    };
    let scale = mode.max((a / b).sqrt());
    let (rlo, rhi) = crate::golden::bracket_minimum(|z| -g(z), mode + 0.5 * scale, 0.5 * scale);
    let hi = crate::golden::minimize(|z| -g(z), rlo.max(mode), rhi, 1e-12);
    // left branch: g < 0 on (0, mode), minimum interior
    let left = crate::golden::minimize(|z| g(z), 1e-300, mode, 1e-12);
    // pad against golden-section truncation of the true extrema
    let (v_lo, v_hi) = (
        g(left.x).min(0.0) * (1.0 + 1e-9),
        (-hi.value).max(0.0) * (1.0 + 1e-9),
    );
    if !(v_lo.is_finite() && v_hi.is_finite() && v_hi > 0.0) {
        return Err(Error::Numeric(format!(
            "gig envelope degenerate: [{v_lo}, {v_hi}]"
        )));
    }
    Ok(SamplerKind::Gig {
        lambda,
        a,
        b,
        invert,
        mode,
        ln_h_mode,
        v_lo,
        v_hi,
    })
}
