//! Concave-utility optimization through the one-dimensional reduction: the
//! optimum lies on the ray x_c = (c / v' Sigma^-1 v) Sigma^-1 v, and along it
//! terminal wealth is W0(1+r_f) + c W0 eta with eta = alpha + beta Z +
//! sigma sqrt(Z) N. Gamma(c) = E U(.) is maximized over c >= 0.
//!
//! Before any integration the evaluator decides whether Gamma can be finite
//! at all by pairing the utility's tail growth orders with the mixing law's
//! moment domain; this is what makes the heavy-tail divergences show up as
//! exact -infinity instead of a quadrature artifact.

use crate::error::{Error, Result};
use crate::golden;
use crate::linalg;
use crate::market::{EtaCoefficients, NmvmModel, ValidationLevel};
use crate::quad::{self, QuadRule};
use crate::utility::{LeftTail, UtilitySpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMethod {
    MonteCarlo,
    Quadrature,
}

#[derive(Debug, Clone, Copy)]
pub struct GammaEvalConfig {
    pub method: GammaMethod,
    pub n_samples: usize,
    pub seed: u64,
    /// Node-count hint for the mixing dimension (heavy tails use ~2x).
    pub z_nodes: usize,
    /// Gauss-Hermite nodes for the Gaussian dimension.
    pub n_nodes: usize,
    /// |U| beyond this makes the estimate report -infinity.
    pub clip: f64,
}

impl Default for GammaEvalConfig {
    fn default() -> Self {
        GammaEvalConfig {
            method: GammaMethod::Quadrature,
            n_samples: 1_000_000,
            seed: 0,
            z_nodes: 256,
            n_nodes: 64,
            clip: 1e15,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcaveSolution {
    pub weights: Vec<f64>,
    pub c_star: f64,
    pub lambda_u: f64,
    /// None when 1' Sigma^-1 v = 0 (zero-net-weight ray; only the
    /// risk-free split below is meaningful).
    pub tangent: Option<Vec<f64>>,
    pub risk_free_fraction: f64,
    pub expected_utility: f64,
    pub certainty_equivalent: f64,
}

enum EvalMode {
    /// Exponential utility: Gamma(c) has a closed form through L_Z.
    ClosedExp { a: f64 },
    Quadrature { z: QuadRule, h: QuadRule },
    MonteCarlo { z: Vec<f64>, n: Vec<f64> },
}

pub struct GammaEvaluator<'m> {
    model: &'m NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    pub eta: EtaCoefficients,
    base: f64,
    mode: EvalMode,
    /// Left-tail moment requirement failed: Gamma(c) = -infinity for c > 0.
    divergent: bool,
    clip: f64,
}

impl<'m> GammaEvaluator<'m> {
    pub fn new(
        model: &'m NmvmModel,
        spec: UtilitySpec,
        w0: f64,
        cfg: &GammaEvalConfig,
    ) -> Result<Self> {
        spec.validate()?;
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "initial wealth must be positive, got {w0}"
            )));
        }
        let report = model.validate(ValidationLevel::Concave);
        if !report.passed() {
            return Err(Error::Validation(report.failures.join("; ")));
        }
        let eta = model.eta_coefficients()?;
        let law = model.law();

        // tail requirements: wealth scales like Z on the beta side and like
        // sqrt(Z) N on the diffusive side, so a |w|^p tail needs E Z^p or
        // E Z^(p/2) respectively
        let mut divergent = false;
        let mut closed_exp = None;
        match spec.left_tail() {
            LeftTail::Bounded => {}
            LeftTail::ExpCoef(a) => closed_exp = Some(a),
            LeftTail::Power(p) => {
                let req = if eta.beta < 0.0 { p } else { 0.5 * p };
                if !law.moment_finite(req) {
                    divergent = true;
                }
            }
        }
        let r = spec.right_tail_order();
        if r > 0.0 && closed_exp.is_none() {
            let req = if eta.beta > 0.0 { r } else { 0.5 * r };
            if !law.moment_finite(req) {
                return Err(Error::UnsupportedModel(format!(
                    "the positive part of expected utility diverges: the \
                     utility grows like w^{r} and E Z^{req} is infinite"
                )));
            }
        }

        let mode = match (closed_exp, cfg.method) {
            // the closed form is exact and, unlike quadrature, correct under
            // exponential integrand growth; Monte Carlo stays available as
            // the sampling-based comparison path
            (Some(a), GammaMethod::Quadrature) => EvalMode::ClosedExp { a },
            (_, GammaMethod::Quadrature) => EvalMode::Quadrature {
                z: law.z_rule(cfg.z_nodes),
                h: quad::hermite_prob(cfg.n_nodes),
            },
            (_, GammaMethod::MonteCarlo) => {
                if cfg.n_samples == 0 {
                    return Err(Error::InvalidParameter("n_samples must be positive".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                let sampler = law.sampler()?;
                let mut z = Vec::with_capacity(cfg.n_samples);
                let mut n = Vec::with_capacity(cfg.n_samples);
                for _ in 0..cfg.n_samples {
                    z.push(sampler.draw(&mut rng));
                    n.push(StandardNormal.sample(&mut rng));
                }
                EvalMode::MonteCarlo { z, n }
            }
        };
        Ok(GammaEvaluator {
            model,
            spec,
            w0,
            eta,
            base: w0 * (1.0 + model.r_f()),
            mode,
            divergent,
            clip: cfg.clip,
        })
    }

    /// Gamma(c); -infinity is a legitimate value. c = 0 never samples.
    pub fn value(&self, c: f64) -> f64 {
        if c == 0.0 {
            return self.spec.eval(self.base);
        }
        if self.divergent {
            return f64::NEG_INFINITY;
        }
        let scale = c * self.w0;
        match &self.mode {
            EvalMode::ClosedExp { a } => {
                let t = a * scale;
                let arg = t * self.eta.beta - 0.5 * t * t * self.eta.sigma_eta * self.eta.sigma_eta;
                let ll = self.model.law().log_laplace(arg);
                if ll == f64::INFINITY {
                    f64::NEG_INFINITY
                } else {
                    -(-a * self.base - t * self.eta.alpha + ll).exp()
                }
            }
            EvalMode::Quadrature { z, h } => {
                let mut acc = 0.0;
                for (&zk, &wk) in z.nodes.iter().zip(&z.weights) {
                    let drift = self.eta.alpha + self.eta.beta * zk;
                    let vol = self.eta.sigma_eta * zk.sqrt();
                    for (&nj, &hj) in h.nodes.iter().zip(&h.weights) {
                        let u = self.spec.eval(self.base + scale * (drift + vol * nj));
                        if !u.is_finite() || u.abs() > self.clip {
                            return f64::NEG_INFINITY;
                        }
                        acc += wk * hj * u;
                    }
                }
                acc
            }
            EvalMode::MonteCarlo { z, n } => {
                const CHUNK: usize = 65536;
                let partials: Vec<Option<f64>> = z
                    .par_chunks(CHUNK)
                    .zip(n.par_chunks(CHUNK))
                    .map(|(zc, nc)| {
                        let mut s = 0.0;
                        for (&zi, &ni) in zc.iter().zip(nc) {
                            let eta = self.eta.alpha
                                + self.eta.beta * zi
                                + self.eta.sigma_eta * zi.sqrt() * ni;
                            let u = self.spec.eval(self.base + scale * eta);
                            if !u.is_finite() || u.abs() > self.clip {
                                return None;
                            }
                            s += u;
                        }
                        Some(s)
                    })
                    .collect();
                let mut total = 0.0;
                for p in partials {
                    match p {
                        Some(s) => total += s,
                        None => return f64::NEG_INFINITY,
                    }
                }
                total / z.len() as f64
            }
        }
    }

    /// Gamma(c) = -infinity for every c > 0, known without integrating.
    fn known_all_divergent(&self) -> bool {
        if self.divergent {
            return true;
        }
        if let EvalMode::ClosedExp { .. } = self.mode {
            // the Laplace argument ~ t beta - O(t^2) stays below s_hat = 0
            // for every c > 0 unless beta is positive
            let cv = self.model.law().critical_value();
            return cv.s_hat == 0.0 && self.eta.beta <= 0.0;
        }
        false
    }
}

pub fn gamma_value(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    c: f64,
    cfg: &GammaEvalConfig,
) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Range(format!("need c >= 0, got {c}")));
    }
    Ok(GammaEvaluator::new(model, spec, w0, cfg)?.value(c))
}

fn degenerate_error(ev: &GammaEvaluator) -> Error {
    Error::Degenerate(format!(
        "expected utility is negatively infinite for every positive exposure \
         along the excess-return ray: the mixing law cannot support the \
         utility's lower tail (eta drift beta = {:.6}); the only admissible \
         allocation is fully risk-free, which this routine treats as a \
         degenerate problem rather than an optimum",
        ev.eta.beta
    ))
}

/// argmax of Gamma over c >= 0 for a prebuilt evaluator.
pub fn maximize_gamma_with(ev: &GammaEvaluator) -> Result<f64> {
    if ev.known_all_divergent() {
        return Err(degenerate_error(ev));
    }
    let g0 = ev.value(0.0);
    // bracket by doubling until two consecutive decreases (or a -infinity
    // wall, which also bounds the maximizer)
    let mut hi = 1.0;
    let mut prev = g0;
    let mut decreases = 0;
    let mut c = 1.0;
    let mut any_finite_interior = false;
    for _ in 0..200 {
        let g = ev.value(c);
        if g == f64::NEG_INFINITY {
            hi = c;
            break;
        }
        any_finite_interior = true;
        if g < prev {
            decreases += 1;
        } else {
            decreases = 0;
        }
        prev = g;
        hi = c;
        if decreases >= 2 {
            break;
        }
        c *= 2.0;
        if c > 1e60 {
            return Err(Error::Degenerate(
                "Gamma keeps increasing along the ray; expected utility is \
                 unbounded above for this utility/model pair"
                    .into(),
            ));
        }
    }
    if !any_finite_interior {
        // the feasible region, if any, sits below the first probe
        let mut probe = hi;
        let mut found = false;
        for _ in 0..80 {
            probe *= 0.5;
            if ev.value(probe).is_finite() {
                hi = 2.0 * probe;
                found = true;
                break;
            }
        }
        if !found {
            return Err(degenerate_error(ev));
        }
    }
    let r = golden::minimize(|c| -ev.value(c), 0.0, hi, 1e-10 * hi.max(1.0));
    let (c_int, g_int) = (r.x, -r.value);
    if !g_int.is_finite() {
        return Err(degenerate_error(ev));
    }
    // the boundary c = 0 wins ties: all-in risk-free is reported exactly
    if g_int - g0 <= 1e-12 * (1.0 + g0.abs()) {
        return Ok(0.0);
    }
    Ok(c_int)
}

pub fn maximize_gamma(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    cfg: &GammaEvalConfig,
) -> Result<f64> {
    maximize_gamma_with(&GammaEvaluator::new(model, spec, w0, cfg)?)
}

pub fn optimal_portfolio(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    cfg: &GammaEvalConfig,
) -> Result<ConcaveSolution> {
    let ev = GammaEvaluator::new(model, spec, w0, cfg)?;
    let c_star = maximize_gamma_with(&ev)?;
    let v = model.excess_vector()?;
    let sv = model.solve_sigma(&v);
    let vsv = linalg::dot(&v, &sv);
    let one_sv: f64 = sv.iter().sum();
    let weights: Vec<f64> = sv.iter().map(|s| s * c_star / vsv).collect();
    let tangent = if one_sv != 0.0 {
        Some(sv.iter().map(|s| s / one_sv).collect())
    } else {
        None
    };
    let expected_utility = ev.value(c_star);
    let certainty_equivalent = spec.certainty_equivalent(expected_utility)?;
    Ok(ConcaveSolution {
        risk_free_fraction: 1.0 - weights.iter().sum::<f64>(),
        weights,
        c_star,
        lambda_u: one_sv / vsv * c_star,
        tangent,
        expected_utility,
        certainty_equivalent,
    })
}

/// T = Sigma^-1 v / (1' Sigma^-1 v).
pub fn tangent_skew(model: &NmvmModel) -> Result<Vec<f64>> {
    let v = model.excess_vector()?;
    let sv = model.solve_sigma(&v);
    let one_sv: f64 = sv.iter().sum();
    if one_sv == 0.0 {
        return Err(Error::Degenerate(
            "Sigma^-1 v sums to zero; the tangent portfolio is undefined".into(),
        ));
    }
    Ok(sv.iter().map(|s| s / one_sv).collect())
}

/// Classical tangent Omega^-1 (m - 1 r_f) normalized to unit sum.
pub fn tangent_mv(mean: &[f64], cov: &[f64], r_f: f64) -> Result<Vec<f64>> {
    let d = mean.len();
    if cov.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "covariance has {} entries for {} assets",
            cov.len(),
            d
        )));
    }
    let chol = linalg::Cholesky::factor(cov, d, 1e-12)?;
    let u: Vec<f64> = mean.iter().map(|m| m - r_f).collect();
    let su = chol.solve(&u);
    let one_su: f64 = su.iter().sum();
    if one_su == 0.0 {
        return Err(Error::Degenerate(
            "Omega^-1 (m - 1 r_f) sums to zero; the tangent portfolio is undefined".into(),
        ));
    }
    Ok(su.iter().map(|s| s / one_su).collect())
}

/// Mean vector m = mu + gamma EZ and covariance Omega = Var(Z) gamma gamma'
/// + EZ Sigma of the asset returns. Errors when either moment is infinite.
pub fn nmvm_mv_inputs(model: &NmvmModel) -> Result<(Vec<f64>, Vec<f64>)> {
    let mom = model.law().moments();
    if !mom.mean.is_finite() || !mom.variance.is_finite() {
        return Err(Error::UnsupportedModel(format!(
            "return moments are undefined: the mixing law has mean {} and \
             variance {}; a mean-variance description of this market does \
             not exist",
            mom.mean, mom.variance
        )));
    }
    let d = model.d();
    let m: Vec<f64> = model
        .mu()
        .iter()
        .zip(model.gamma())
        .map(|(&mu, &g)| mu + g * mom.mean)
        .collect();
    let mut omega = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            omega[i * d + j] =
                mom.variance * model.gamma()[i] * model.gamma()[j] + mom.mean * model.sigma()[i * d + j];
        }
    }
    Ok((m, omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontierKind {
    Mv,
    Skew,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontierRow {
    pub kind: FrontierKind,
    pub c: f64,
    pub std: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontierTable {
    pub rows: Vec<FrontierRow>,
    /// Reason the mean-variance branch was omitted, when it was.
    pub mv_skipped: Option<String>,
}

/// Both frontiers on a c-grid of `n_points` over [0, c_max]. Wealth means
/// and standard deviations; infinite Var Z makes the skew branch report
/// infinite spread truthfully and drops the MV branch.
pub fn frontier(model: &NmvmModel, w0: f64, n_points: usize, c_max: f64) -> Result<FrontierTable> {
    if n_points < 2 || !(c_max > 0.0) || !c_max.is_finite() {
        return Err(Error::InvalidParameter(
            "frontier needs n_points >= 2 and c_max > 0".into(),
        ));
    }
    if !(w0 > 0.0 && w0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "initial wealth must be positive, got {w0}"
        )));
    }
    let eta = model.eta_coefficients()?;
    let mom = model.law().moments();
    let var_eta = if eta.beta == 0.0 {
        eta.sigma_eta * eta.sigma_eta * mom.mean
    } else {
        eta.beta * eta.beta * mom.variance + eta.sigma_eta * eta.sigma_eta * mom.mean
    };
    let base = w0 * (1.0 + model.r_f());
    let grid: Vec<f64> = (0..n_points)
        .map(|i| c_max * i as f64 / (n_points - 1) as f64)
        .collect();

    let mut rows = Vec::new();
    let mv_skipped = match nmvm_mv_inputs(model) {
        Ok((m, omega)) => {
            let d = model.d();
            let chol = linalg::Cholesky::factor(&omega, d, 1e-12)?;
            let u: Vec<f64> = m.iter().map(|mi| mi - model.r_f()).collect();
            let su = chol.solve(&u);
            let usu = linalg::dot(&u, &su);
            for &c in &grid {
                rows.push(FrontierRow {
                    kind: FrontierKind::Mv,
                    c,
                    std: c * w0 / usu.sqrt(),
                    mean: base + c * w0,
                });
            }
            None
        }
        Err(e) => Some(e.to_string()),
    };
    for &c in &grid {
        // zero exposure has zero spread even when var_eta is infinite
        let std = if c == 0.0 { 0.0 } else { c * w0 * var_eta.sqrt() };
        rows.push(FrontierRow { kind: FrontierKind::Skew, c, std, mean: base + c * w0 });
    }
    Ok(FrontierTable { rows, mv_skipped })
}
