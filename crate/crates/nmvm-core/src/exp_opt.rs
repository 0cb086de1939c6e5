//! Exponential-utility optimization. The d-dimensional problem collapses to
//! minimizing the strictly convex Q(theta) = e^{C theta} L_Z(A/2 -
//! theta^2 C/2) over Theta = [-theta_hat, theta_hat]; everything here works
//! in log domain so large a W0 cannot overflow.
//!
//! Endpoint care: at theta = +-theta_hat the Laplace argument equals the
//! critical value exactly in real arithmetic but not in floating point, so
//! boundary values are always evaluated through log_laplace(s_hat) directly.

use crate::error::{Error, Result};
use crate::golden;
use crate::linalg;
use crate::market::NmvmModel;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThetaDomain {
    /// Half width of Theta; +infinity when the critical value is -infinity.
    pub theta_hat: f64,
    /// Whether the endpoints belong to Theta.
    pub closed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpSolution {
    pub weights: Vec<f64>,
    pub q_min: f64,
    /// -e^{log_neg_expected_utility}; may underflow for large a W0.
    pub expected_utility: f64,
    pub log_neg_expected_utility: f64,
    pub risk_aversion: f64,
    pub initial_wealth: f64,
}

impl ExpSolution {
    /// CE solves -e^{-a CE} = EU.
    pub fn certainty_equivalent(&self) -> f64 {
        -self.log_neg_expected_utility / self.risk_aversion
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShortSalesSolution {
    #[serde(flatten)]
    pub base: ExpSolution,
    /// Indices forced to zero; empty means the unconstrained optimum was
    /// already in the positive orthant.
    pub active_set: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WealthFloorSolution {
    pub weights: Vec<f64>,
    pub expected_utility: f64,
    pub log_neg_expected_utility: f64,
    /// Whether the floor constraint held with equality at the optimum.
    pub binding: bool,
    pub expected_wealth: f64,
}

pub fn theta_domain(model: &NmvmModel) -> Result<ThetaDomain> {
    let s = model.scalars();
    if s.c <= 0.0 {
        return Err(Error::Validation(
            "excess-return quadratic form C must be positive".into(),
        ));
    }
    let cv = model.law().critical_value();
    if cv.s_hat == f64::NEG_INFINITY {
        return Ok(ThetaDomain {
            theta_hat: f64::INFINITY,
            closed: false,
        });
    }
    Ok(ThetaDomain {
        theta_hat: ((s.a - 2.0 * cv.s_hat) / s.c).sqrt(),
        closed: cv.finite_at_s_hat,
    })
}

/// ln Q(theta); +infinity outside the finiteness region.
pub fn log_q(model: &NmvmModel, theta: f64) -> f64 {
    let s = model.scalars();
    let arg = 0.5 * s.a - 0.5 * theta * theta * s.c;
    let ll = model.law().log_laplace(arg);
    if ll == f64::INFINITY {
        f64::INFINITY
    } else {
        s.c * theta + ll
    }
}

/// Q(theta) as an extended real.
pub fn q_function(model: &NmvmModel, theta: f64) -> f64 {
    let lq = log_q(model, theta);
    if lq == f64::INFINITY {
        f64::INFINITY
    } else {
        lq.exp()
    }
}

/// Minimizer of Q over Theta with its log value.
pub fn minimize_q(model: &NmvmModel) -> Result<(f64, f64)> {
    let dom = theta_domain(model)?;
    let s = model.scalars();
    let cv = model.law().critical_value();
    if dom.theta_hat == 0.0 {
        // Theta degenerates to {0}: only the zero portfolio has finite EU
        return Ok((0.0, log_q(model, 0.0)));
    }
    let (mut q, mut val) = if dom.theta_hat.is_finite() {
        let th = dom.theta_hat;
        let r = golden::minimize(|t| log_q(model, t), -th, th, 1e-10 * th.max(1.0));
        (r.x, r.value)
    } else {
        // log Q(0) = ln L(A/2) is finite, so a bracket always exists
        let (lo, hi) = golden::bracket_minimum(|t| log_q(model, t), 0.0, 1.0);
        let r = golden::minimize(
            |t| log_q(model, t),
            lo,
            hi,
            1e-10 * (hi - lo).abs().max(1.0),
        );
        (r.x, r.value)
    };
    if !val.is_finite() {
        return Err(Error::Numeric(
            "Q(theta) could not be evaluated finitely near its minimum".into(),
        ));
    }
    if dom.closed && dom.theta_hat.is_finite() {
        // exact boundary values through the transform's limit at s_hat
        let ll_end = model.law().log_laplace(cv.s_hat);
        for sign in [-1.0, 1.0] {
            let end_val = s.c * sign * dom.theta_hat + ll_end;
            if end_val < val {
                q = sign * dom.theta_hat;
                val = end_val;
            }
        }
    }
    Ok((q, val))
}

/// ln(-EU(x)) for an arbitrary portfolio; +infinity encodes EU = -infinity.
pub fn log_neg_expected_utility(model: &NmvmModel, a: f64, w0: f64, x: &[f64]) -> Result<f64> {
    if x.len() != model.d() {
        return Err(Error::DimensionMismatch(format!(
            "portfolio has {} entries for {} assets",
            x.len(),
            model.d()
        )));
    }
    let t = a * w0;
    let proj = model.wealth_projection(x)?;
    let mut g = t * proj.a1 - 0.5 * t * t * proj.a2 * proj.a2;
    // the optimum can sit exactly on the transform's critical value; forming
    // g then rounds a few ulps past it, which would misreport EU = -infinity
    let cv = model.law().critical_value();
    let snap = 64.0 * f64::EPSILON * (t * proj.a1).abs().max(0.5 * t * t * proj.a2 * proj.a2);
    if cv.finite_at_s_hat && g < cv.s_hat && g >= cv.s_hat - snap {
        g = cv.s_hat;
    }
    let ll = model.law().log_laplace(g);
    Ok(-t * (1.0 + model.r_f()) - t * proj.a0 + ll)
}

fn check_a_w0(a: f64, w0: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite() && w0 > 0.0 && w0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need risk aversion a > 0 and initial wealth W0 > 0, got ({a}, {w0})"
        )));
    }
    Ok(())
}

pub fn global_optimal(model: &NmvmModel, a: f64, w0: f64) -> Result<ExpSolution> {
    check_a_w0(a, w0)?;
    let (q_min, log_q_min) = minimize_q(model)?;
    let s = model.scalars();
    let t = a * w0;
    let sg = model.solve_sigma(model.gamma());
    let sm = model.solve_sigma(&model.m_tilde());
    let weights: Vec<f64> = sg
        .iter()
        .zip(&sm)
        .map(|(&g, &m)| (g - q_min * m) / t)
        .collect();
    // ln(-EU) = -a W0 (1+r_f) - B + ln Q(q_min), exact at Theta endpoints
    let log_neg = -t * (1.0 + model.r_f()) - s.b + log_q_min;
    Ok(ExpSolution {
        weights,
        q_min,
        expected_utility: -log_neg.exp(),
        log_neg_expected_utility: log_neg,
        risk_aversion: a,
        initial_wealth: w0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneSolution {
    pub weights: Vec<f64>,
    pub q_c: f64,
}

/// Best portfolio with excess mean x' (mu - 1 r_f) fixed at c.
pub fn hyperplane_optimal(model: &NmvmModel, a: f64, w0: f64, c: f64) -> Result<HyperplaneSolution> {
    check_a_w0(a, w0)?;
    let s = model.scalars();
    let t = a * w0;
    let q_c = (s.b - t * c) / s.c;
    let sg = model.solve_sigma(model.gamma());
    let sm = model.solve_sigma(&model.m_tilde());
    let weights: Vec<f64> = sg
        .iter()
        .zip(&sm)
        .map(|(&g, &m)| (g - q_c * m) / t)
        .collect();
    Ok(HyperplaneSolution { weights, q_c })
}

/// Strict positivity threshold: candidates with entries at or below this on
/// their support are dropped (the smaller support is enumerated anyway).
const POSITIVITY_TOL: f64 = 1e-12;
const MAX_ENUM_ASSETS: usize = 20;

struct FaceCandidate {
    mask: u32,
    weights: Vec<f64>,
    q_min: f64,
    log_neg: f64,
}

fn face_optimum(model: &NmvmModel, a: f64, w0: f64, mask: u32) -> Option<FaceCandidate> {
    let d = model.d();
    let idx: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
    let k = idx.len();
    let mu: Vec<f64> = idx.iter().map(|&i| model.mu()[i]).collect();
    let gamma: Vec<f64> = idx.iter().map(|&i| model.gamma()[i]).collect();
    let mut sigma = vec![0.0; k * k];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            sigma[r * k + c] = model.sigma()[i * d + j];
        }
    }
    let t = a * w0;
    let (sub_weights, q_min, log_neg) = if mu.iter().all(|&m| m == model.r_f()) {
        // excess returns vanish on this face; the optimum is the pure skew
        // position x = Sigma^-1 gamma / t with Laplace argument A/2
        let chol = linalg::Cholesky::factor(&sigma, k, 1e-12).ok()?;
        let x = chol.solve(&gamma);
        let half_a = 0.5 * linalg::dot(&gamma, &x);
        let ll = model.law().log_laplace(half_a);
        if ll == f64::INFINITY {
            return None;
        }
        let x: Vec<f64> = x.iter().map(|w| w / t).collect();
        (x, 0.0, -t * (1.0 + model.r_f()) + ll)
    } else {
        let sub = NmvmModel::new(mu, gamma, sigma, model.r_f(), *model.law()).ok()?;
        let sol = global_optimal(&sub, a, w0).ok()?;
        (sol.weights, sol.q_min, sol.log_neg_expected_utility)
    };
    if sub_weights.iter().any(|&w| w <= POSITIVITY_TOL) {
        return None;
    }
    let mut weights = vec![0.0; d];
    for (r, &i) in idx.iter().enumerate() {
        weights[i] = sub_weights[r];
    }
    Some(FaceCandidate {
        mask,
        weights,
        q_min,
        log_neg,
    })
}

/// Best portfolio in the nonnegative orthant, by enumerating supports.
pub fn short_sales_optimal(model: &NmvmModel, a: f64, w0: f64) -> Result<ShortSalesSolution> {
    check_a_w0(a, w0)?;
    let d = model.d();
    if d > MAX_ENUM_ASSETS {
        return Err(Error::UnsupportedModel(format!(
            "short-sales enumeration is limited to {MAX_ENUM_ASSETS} assets, model has {d}"
        )));
    }
    let t = a * w0;
    let masks: Vec<u32> = (1..(1u32 << d)).collect();
    let mut candidates: Vec<FaceCandidate> = masks
        .par_iter()
        .filter_map(|&m| face_optimum(model, a, w0, m))
        .collect();
    // zero portfolio is always feasible
    candidates.push(FaceCandidate {
        mask: 0,
        weights: vec![0.0; d],
        q_min: 0.0,
        log_neg: -t * (1.0 + model.r_f()),
    });
    // deterministic order: higher EU, then smaller support, then mask
    candidates.sort_by(|x, y| {
        x.log_neg
            .total_cmp(&y.log_neg)
            .then(x.mask.count_ones().cmp(&y.mask.count_ones()))
            .then(x.mask.cmp(&y.mask))
    });
    let best = &candidates[0];
    let active_set: Vec<usize> = (0..d).filter(|i| best.mask >> i & 1 == 0).collect();
    Ok(ShortSalesSolution {
        base: ExpSolution {
            weights: best.weights.clone(),
            q_min: best.q_min,
            expected_utility: -best.log_neg.exp(),
            log_neg_expected_utility: best.log_neg,
            risk_aversion: a,
            initial_wealth: w0,
        },
        active_set,
    })
}

/// Maximize g over {x' m_tilde = c, x' v = r}; g is concave quadratic so the
/// KKT system is linear. Returns the portfolio.
fn two_constraint_argmax(
    model: &NmvmModel,
    t: f64,
    sg: &[f64],
    sm: &[f64],
    sv: &[f64],
    v: &[f64],
    c: f64,
    r: f64,
) -> Vec<f64> {
    let mt = model.m_tilde();
    let b = linalg::dot(model.gamma(), sm);
    let f = linalg::dot(model.gamma(), sv);
    let cc = linalg::dot(&mt, sm);
    let dd = linalg::dot(&mt, sv);
    let ee = linalg::dot(v, sv);
    // [cc dd; dd ee] (l1, l2)' = t^2 (b/t - c, f/t - r)'
    let det = cc * ee - dd * dd;
    let rhs1 = t * t * (b / t - c);
    let rhs2 = t * t * (f / t - r);
    let l1 = (ee * rhs1 - dd * rhs2) / det;
    let l2 = (cc * rhs2 - dd * rhs1) / det;
    (0..model.d())
        .map(|i| sg[i] / t - (l1 * sm[i] + l2 * sv[i]) / (t * t))
        .collect()
}

/// Best portfolio subject to E W(x) >= floor.
pub fn wealth_floor_optimal(
    model: &NmvmModel,
    a: f64,
    w0: f64,
    floor: f64,
) -> Result<WealthFloorSolution> {
    check_a_w0(a, w0)?;
    let t = a * w0;
    let v = model.excess_vector()?;
    let r = (floor - w0 * (1.0 + model.r_f())) / w0;

    let unconstrained = global_optimal(model, a, w0)?;
    let ew_dir = linalg::dot(&unconstrained.weights, &v);
    if ew_dir >= r {
        let log_neg = unconstrained.log_neg_expected_utility;
        return Ok(WealthFloorSolution {
            expected_wealth: w0 * (1.0 + model.r_f()) + w0 * ew_dir,
            weights: unconstrained.weights,
            expected_utility: -log_neg.exp(),
            log_neg_expected_utility: log_neg,
            binding: false,
        });
    }

    let mt = model.m_tilde();
    let sg = model.solve_sigma(model.gamma());
    let sm = model.solve_sigma(&mt);
    let sv = model.solve_sigma(&v);
    let cc = linalg::dot(&mt, &sm);
    let dd = linalg::dot(&mt, &sv);
    let ee = linalg::dot(&v, &sv);

    let boundary_x: Box<dyn Fn(f64) -> Vec<f64>> = if cc * ee - dd * dd <= 1e-12 * cc * ee {
        // v is parallel to m_tilde: the floor pins c = x' m_tilde too, and a
        // single-constraint solve on x'v = r applies for every c
        let f = linalg::dot(model.gamma(), &sv);
        let q = (f - t * r) / ee;
        let x: Vec<f64> = (0..model.d()).map(|i| (sg[i] - q * sv[i]) / t).collect();
        Box::new(move |_c| x.clone())
    } else {
        let sg = sg.clone();
        let sm = sm.clone();
        let sv = sv.clone();
        let v = v.clone();
        Box::new(move |c| two_constraint_argmax(model, t, &sg, &sm, &sv, &v, c, r))
    };

    let profile = |c: f64| -> f64 {
        let x = boundary_x(c);
        let proj = model.wealth_projection(&x).expect("dimensions fixed");
        let g = t * proj.a1 - 0.5 * t * t * proj.a2 * proj.a2;
        let ll = model.law().log_laplace(g);
        if ll == f64::INFINITY {
            f64::INFINITY
        } else {
            -t * (1.0 + model.r_f()) - t * proj.a0 + ll
        }
    };

    // find a finite center: g along the boundary is concave quadratic in c,
    // so its vertex maximizes the Laplace argument
    let c0 = linalg::dot(&unconstrained.weights, &mt);
    let scale = c0.abs().max(1.0);
    let g_of = |c: f64| {
        let x = boundary_x(c);
        let proj = model.wealth_projection(&x).expect("dimensions fixed");
        t * proj.a1 - 0.5 * t * t * proj.a2 * proj.a2
    };
    let (g_m, g_0, g_p) = (g_of(c0 - scale), g_of(c0), g_of(c0 + scale));
    let denom = g_m - 2.0 * g_0 + g_p;
    let c_vertex = if denom.abs() > 1e-300 {
        c0 - scale * 0.5 * (g_p - g_m) / denom
    } else {
        c0
    };
    let center = if profile(c_vertex).is_finite() {
        c_vertex
    } else {
        return Err(Error::Degenerate(
            "the wealth floor forces portfolios whose expected utility is \
             negatively infinite"
                .into(),
        ));
    };

    let (lo, hi) = golden::bracket_minimum(&profile, center, 0.5 * scale);
    // the profile is expected unimodal; verify on a coarse scan and fall
    // back to a dense scan if that fails
    let scan_min = |n: usize| -> (f64, usize, Vec<f64>) {
        let vals: Vec<f64> = (0..=n)
            .map(|i| profile(lo + (hi - lo) * i as f64 / n as f64))
            .collect();
        let mut dips = 0;
        for i in 1..n {
            if vals[i] < vals[i - 1] - 1e-12 && vals[i] < vals[i + 1] - 1e-12 {
                dips += 1;
            }
        }
        let arg = (0..=n)
            .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
            .unwrap();
        (lo + (hi - lo) * arg as f64 / n as f64, dips, vals)
    };
    let (_, dips, _) = scan_min(64);
    let c_star = if dips <= 1 {
        golden::minimize(&profile, lo, hi, 1e-10 * scale).x
    } else {
        let (dense_arg, _, _) = scan_min(4096);
        let h = (hi - lo) / 4096.0;
        golden::minimize(&profile, dense_arg - h, dense_arg + h, 1e-10 * scale).x
    };
    let weights = boundary_x(c_star);
    let log_neg = profile(c_star);
    Ok(WealthFloorSolution {
        expected_wealth: w0 * (1.0 + model.r_f()) + w0 * linalg::dot(&weights, &v),
        weights,
        expected_utility: -log_neg.exp(),
        log_neg_expected_utility: log_neg,
        binding: true,
    })
}
