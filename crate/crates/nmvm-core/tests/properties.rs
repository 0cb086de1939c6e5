//! Structural properties of the solvers, checked on fixture markets and on
//! seeded random models. Everything here is deterministic: random sweeps use
//! fixed ChaCha8 seeds so a pass is reproducible bit for bit.

mod common;

use nmvm_core::concave::{self, GammaEvalConfig, GammaEvaluator};
use nmvm_core::exp_opt;
use nmvm_core::market::NmvmModel;
use nmvm_core::oracle;
use nmvm_core::quad;
use nmvm_core::utility::UtilitySpec;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// E[U(W(x))] by tensor quadrature over (Z, N); exact up to rule error.
fn quadrature_eu(model: &NmvmModel, spec: UtilitySpec, w0: f64, x: &[f64], nz: usize, nn: usize) -> f64 {
    let wp = model.wealth_projection(x).unwrap();
    let base = w0 * (1.0 + model.r_f());
    let zr = model.law().z_rule(nz);
    let hr = quad::hermite_prob(nn);
    let mut total = 0.0;
    for (&z, &wz) in zr.nodes.iter().zip(&zr.weights) {
        let sq = z.sqrt();
        let mut inner = 0.0;
        for (&n, &wn) in hr.nodes.iter().zip(&hr.weights) {
            inner += wn * spec.eval(base + w0 * (wp.a0 + wp.a1 * z + wp.a2 * sq * n));
        }
        total += wz * inner;
    }
    total
}

/// Two-sample Kolmogorov-Smirnov statistic.
fn ks_stat(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

// ---------------------------------------------------------------------------
// Q(theta) and the exponential route

#[test]
fn q_function_is_strictly_convex_at_midpoints() {
    let models = [
        common::heavy_skew_model(),
        common::gaussian_model(),
        common::light_model(),
        common::random_model(31, 2),
        common::random_model(35, 2),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for m in &models {
        let dom = exp_opt::theta_domain(m).unwrap();
        let lim = (0.99 * dom.theta_hat).min(3.0);
        for _ in 0..100 {
            // keep the triple well separated so curvature dominates rounding
            let t1 = rng.gen_range(-lim..lim * 0.5);
            let t3 = rng.gen_range(t1 + 0.2 * lim..lim);
            let mid = 0.5 * (t1 + t3);
            let (q1, q2, q3) = (
                exp_opt::q_function(m, t1),
                exp_opt::q_function(m, mid),
                exp_opt::q_function(m, t3),
            );
            assert!(q1.is_finite() && q2.is_finite() && q3.is_finite());
            let avg = 0.5 * (q1 + q3);
            assert!(
                q2 < avg - 1e-13 * avg.abs(),
                "midpoint value {q2} does not sit strictly below the chord {avg} at ({t1}, {t3})"
            );
        }
    }
}

#[test]
fn exp_optimum_beats_coordinate_perturbations() {
    for (m, a, w0) in [
        (common::heavy_skew_model(), 0.15, 10.0),
        (common::light_model(), 1.0, 1.0),
    ] {
        let sol = exp_opt::global_optimal(&m, a, w0).unwrap();
        let v0 = exp_opt::log_neg_expected_utility(&m, a, w0, &sol.weights).unwrap();
        for i in 0..m.d() {
            for step in [1e-4, -1e-4] {
                let mut x = sol.weights.clone();
                x[i] += step;
                let v = exp_opt::log_neg_expected_utility(&m, a, w0, &x).unwrap();
                assert!(
                    v >= v0 - 1e-12,
                    "asset {i} step {step}: objective {v} undercuts the optimum {v0}"
                );
            }
        }
    }
}

#[test]
fn exp_solution_scales_with_risk_aversion_and_wealth() {
    for m in [common::heavy_skew_model(), common::light_model()] {
        let pairs = [(0.1, 1.0), (1.0, 5.0), (2.0, 10.0)];
        let products: Vec<Vec<f64>> = pairs
            .iter()
            .map(|&(a, w0)| {
                let sol = exp_opt::global_optimal(&m, a, w0).unwrap();
                sol.weights.iter().map(|x| a * w0 * x).collect()
            })
            .collect();
        for k in 1..products.len() {
            for i in 0..m.d() {
                let (p, q) = (products[0][i], products[k][i]);
                assert!(
                    (p - q).abs() <= 1e-12 * p.abs().max(1e-12),
                    "a W0 x_{i} drifts across risk aversions: {p} vs {q}"
                );
            }
        }
    }
}

#[test]
fn exp_closed_form_matches_mc_on_50_random_portfolios() {
    let m = common::light_model();
    let (a, w0) = (0.8, 1.2);
    let spec = UtilitySpec::Exponential { a };
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    for k in 0..50 {
        let x: Vec<f64> = (0..m.d()).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let closed = -exp_opt::log_neg_expected_utility(&m, a, w0, &x).unwrap().exp();
        let mc = oracle::mc_expected_utility(&m, spec, w0, &x, 100_000, 9000 + k).unwrap();
        assert_eq!(mc.clipped, 0);
        assert!(
            (mc.estimate - closed).abs() <= 4.0 * mc.std_error,
            "portfolio {k}: MC {} vs closed form {closed} exceeds 4 SE {}",
            mc.estimate,
            mc.std_error
        );
    }
}

#[test]
fn mc_agrees_with_closed_form_on_19_of_20_random_markets() {
    let mut pass = 0;
    for k in 0..20u64 {
        let m = common::random_model(100 + k, 3);
        let (a, w0) = (1.5, 1.0);
        let sol = exp_opt::global_optimal(&m, a, w0).unwrap();
        let closed = -sol.log_neg_expected_utility.exp();
        let mc = oracle::mc_expected_utility(
            &m,
            UtilitySpec::Exponential { a },
            w0,
            &sol.weights,
            200_000,
            7 + k,
        )
        .unwrap();
        if mc.clipped == 0 && (mc.estimate - closed).abs() <= 4.0 * mc.std_error {
            pass += 1;
        }
    }
    assert!(pass >= 19, "only {pass}/20 random markets inside 4 SE");
}

#[test]
fn short_sales_solution_matches_brute_force_grid_in_2d() {
    let (a, w0) = (2.0, 1.0);
    for seed in 200..210u64 {
        let m = common::random_model(seed, 2);
        let sol = exp_opt::short_sales_optimal(&m, a, w0).unwrap();
        assert!(sol.base.weights.iter().all(|&x| x >= 0.0));

        // support dichotomy: unconstrained optimum, or some coordinate at 0
        if sol.active_set.is_empty() {
            let unc = exp_opt::global_optimal(&m, a, w0).unwrap();
            for i in 0..2 {
                assert!((sol.base.weights[i] - unc.weights[i]).abs() <= 1e-12);
            }
        } else {
            assert!(sol.active_set.iter().any(|&i| sol.base.weights[i] == 0.0));
        }

        let hi: Vec<f64> = sol
            .base
            .weights
            .iter()
            .map(|x| 3.0 * x.abs().max(0.05))
            .collect();
        let steps = 150usize;
        let mut best = (f64::INFINITY, [0.0f64; 2]);
        for i in 0..=steps {
            for j in 0..=steps {
                let x = [hi[0] * i as f64 / steps as f64, hi[1] * j as f64 / steps as f64];
                let v = exp_opt::log_neg_expected_utility(&m, a, w0, &x).unwrap();
                if v < best.0 {
                    best = (v, x);
                }
            }
        }
        let sol_v = sol.base.log_neg_expected_utility;
        assert!(
            sol_v <= best.0 + 1e-12,
            "seed {seed}: enumeration value {sol_v} worse than grid best {}",
            best.0
        );
        for i in 0..2 {
            let cell = hi[i] / steps as f64;
            assert!(
                (sol.base.weights[i] - best.1[i]).abs() <= cell + 1e-12,
                "seed {seed}: asset {i} enumeration {} vs grid {} further than one cell {cell}",
                sol.base.weights[i],
                best.1[i]
            );
        }
    }
}

// ---------------------------------------------------------------------------
// The concave route

#[test]
fn gamma_objective_is_concave_at_midpoints() {
    let m = common::light_model();
    let cfg = GammaEvalConfig::default();
    let ev = GammaEvaluator::new(&m, UtilitySpec::HendersonHobson { tau: 0.1 }, 1.0, &cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    for _ in 0..50 {
        let c1 = rng.gen_range(1e-4..0.06);
        let c3 = rng.gen_range(c1 + 0.005..0.08);
        let mid = ev.value(0.5 * (c1 + c3));
        let avg = 0.5 * (ev.value(c1) + ev.value(c3));
        assert!(
            mid >= avg - 1e-8,
            "midpoint value {mid} below the chord {avg} on ({c1}, {c3})"
        );
    }
}

#[test]
fn unit_cost_return_coefficients_are_normalized() {
    for seed in 0..20u64 {
        let m = common::random_model(seed, 3);
        let eta = m.eta_coefficients().unwrap();
        let ez = m.law().moments().mean;
        let resid = (eta.alpha + eta.beta * ez - 1.0).abs();
        assert!(resid <= 1e-12, "seed {seed}: alpha + beta EZ - 1 = {resid:e}");
    }
}

#[test]
fn optimal_direction_is_shared_across_utilities() {
    let m = common::light_model();
    let cfg = GammaEvalConfig::default();
    let specs = [
        UtilitySpec::Exponential { a: 0.5 },
        UtilitySpec::Exponential { a: 2.0 },
        UtilitySpec::HendersonHobson { tau: 0.1 },
        UtilitySpec::Sahara { a: 2.0, b: 1.0, delta: 0.0 },
        UtilitySpec::Sahara { a: 1.5, b: 3.0, delta: 0.0 },
    ];
    let normalized: Vec<Vec<f64>> = specs
        .iter()
        .map(|&spec| {
            let sol = concave::optimal_portfolio(&m, spec, 1.0, &cfg).unwrap();
            assert!(sol.c_star > 0.0);
            let total: f64 = sol.weights.iter().sum();
            sol.weights.iter().map(|x| x / total).collect()
        })
        .collect();
    for k in 1..normalized.len() {
        for i in 0..m.d() {
            assert!(
                (normalized[0][i] - normalized[k][i]).abs() <= 1e-6,
                "normalized weight {i} differs between utility 0 and {k}"
            );
        }
    }
}

#[test]
fn exp_routes_agree_on_light_market() {
    let m = common::light_model();
    let (a, w0) = (1.0, 1.0);
    let closed = exp_opt::global_optimal(&m, a, w0).unwrap();
    let via_gamma = concave::optimal_portfolio(
        &m,
        UtilitySpec::Exponential { a },
        w0,
        &GammaEvalConfig::default(),
    )
    .unwrap();
    for i in 0..m.d() {
        assert!(
            (closed.weights[i] - via_gamma.weights[i]).abs() <= 5e-3,
            "asset {i}: closed {} vs one-dimensional route {}",
            closed.weights[i],
            via_gamma.weights[i]
        );
    }
}

// Known divergence, kept failing on purpose. On the four-asset heavy-tailed
// market the closed form solves the exponential problem off the excess-return
// ray (its optimum has a skewness component), while the one-dimensional
// reduction only searches the ray and its tail pre-check correctly reports
// that every positive exposure along the ray has infinitely negative expected
// utility (the mixing law cannot absorb the exponential left tail when the
// ray's drift coefficient is negative). The two routes therefore cannot be
// compared on this market: the closed form is the correct answer, and the
// reduction declines the problem. This test records that incompatibility
// honestly instead of special-casing it away.
#[test]
fn exp_routes_agree_on_heavy_market() {
    let m = common::heavy_skew_model();
    let (a, w0) = (0.15, 10.0);
    let closed = exp_opt::global_optimal(&m, a, w0).unwrap();
    match concave::optimal_portfolio(
        &m,
        UtilitySpec::Exponential { a },
        w0,
        &GammaEvalConfig::default(),
    ) {
        Ok(sol) => {
            for i in 0..m.d() {
                assert!(
                    (closed.weights[i] - sol.weights[i]).abs() <= 5e-3,
                    "asset {i}: closed {} vs one-dimensional route {}",
                    closed.weights[i],
                    sol.weights[i]
                );
            }
        }
        Err(e) => panic!(
            "route comparison impossible on the heavy-tailed market: the \
             one-dimensional reduction rejects the problem ({e}), while the \
             closed form solves it exactly (optimum off the excess-return \
             ray, q_min = {:.6} at the transform-domain boundary). Both \
             behaviors are individually correct; the agreement check itself \
             is unsatisfiable here and is recorded as a known failure.",
            closed.q_min
        ),
    }
}

#[test]
fn moving_off_the_optimal_ray_lowers_expected_utility() {
    let m = common::heavy_skew_model();
    let spec = UtilitySpec::HendersonHobson { tau: 0.1 };
    let w0 = 10.0;
    let sol = concave::optimal_portfolio(&m, spec, w0, &GammaEvalConfig::default()).unwrap();
    let x = &sol.weights;
    let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let base_eu = quadrature_eu(&m, spec, w0, x, 512, 96);

    // Perturbation directions are drawn orthogonal to the excess-mean vector
    // and to the skewness vector, hence orthogonal to v: the perturbed
    // portfolio keeps the exposure x'v of the optimum and moves purely off
    // the ray, which is exactly what the one-fund claim forbids. (A generic
    // direction also picks up the first-order gap between the ray and the
    // unconstrained optimum, and its difference statistic carries a term
    // linear in Z whose variance this mixing law does not have.)
    let mt = m.m_tilde();
    let e1n: f64 = mt.iter().map(|v| v * v).sum::<f64>().sqrt();
    let e1: Vec<f64> = mt.iter().map(|v| v / e1n).collect();
    let ge1: f64 = m.gamma().iter().zip(&e1).map(|(a, b)| a * b).sum();
    let mut e2: Vec<f64> = m.gamma().iter().zip(&e1).map(|(g, b)| g - ge1 * b).collect();
    let e2n: f64 = e2.iter().map(|v| v * v).sum::<f64>().sqrt();
    e2.iter_mut().for_each(|v| *v /= e2n);

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..10 {
        let g: Vec<f64> = (0..m.d()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let d1: f64 = g.iter().zip(&e1).map(|(a, b)| a * b).sum();
        let d2: f64 = g.iter().zip(&e2).map(|(a, b)| a * b).sum();
        let mut p: Vec<f64> = (0..m.d()).map(|i| g[i] - d1 * e1[i] - d2 * e2[i]).collect();
        let pn: f64 = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        p.iter_mut().for_each(|v| *v /= pn);
        let xp: Vec<f64> = x.iter().zip(&p).map(|(xi, pi)| xi + 0.01 * norm * pi).collect();

        // exact decrease via quadrature
        let pert_eu = quadrature_eu(&m, spec, w0, &xp, 512, 96);
        let gap = base_eu - pert_eu;
        assert!(gap > 0.0, "trial {trial}: quadrature reports no decrease, gap {gap:e}");

        // Monte-Carlo confirmation: mixing draws are sampled, the Gaussian
        // layer is integrated exactly per draw, and both portfolios share
        // every draw, so the estimator sees only the perturbation.
        let (mean, se) = paired_mc_gap(&m, spec, w0, x, &xp, trial as u64);
        assert!(
            mean > 4.0 * se,
            "trial {trial}: paired MC gap {mean:e} not beyond 4 SE {se:e} (exact gap {gap:e})"
        );
    }
}

/// Mean and SE of E[U(W(x)) - U(W(xp)) | Z] over 50k shared mixing draws.
/// For fixed Z the two wealths are jointly Gaussian, so the conditional
/// difference is a 2-D Gauss-Hermite sum; sampling only Z removes the
/// Gaussian part of the variance, which would otherwise swamp a
/// second-order gap.
fn paired_mc_gap(
    model: &NmvmModel,
    spec: UtilitySpec,
    w0: f64,
    x: &[f64],
    xp: &[f64],
    trial: u64,
) -> (f64, f64) {
    let wp = model.wealth_projection(x).unwrap();
    let wq = model.wealth_projection(xp).unwrap();
    let t: Vec<f64> = model.chol().lt_mul(x);
    let tp: Vec<f64> = model.chol().lt_mul(xp);
    let base = w0 * (1.0 + model.r_f());

    // joint law of (t'N, tp'N): tp'N = (sa + c1) N1 + c2 N2 with N1 the
    // normalized t'N component
    let sa = t.iter().map(|v| v * v).sum::<f64>().sqrt();
    let delta: Vec<f64> = tp.iter().zip(&t).map(|(a, b)| a - b).collect();
    let c1: f64 = t.iter().zip(&delta).map(|(a, b)| a * b).sum::<f64>() / sa;
    let c2 = (delta.iter().map(|v| v * v).sum::<f64>() - c1 * c1).max(0.0).sqrt();

    let h1 = quad::hermite_prob(32);
    let h2 = quad::hermite_prob(16);
    let sampler = model.law().sampler().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA5A5_0000 + trial);
    let n = 50_000usize;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..n {
        let z = sampler.draw(&mut rng);
        let sq = z.sqrt();
        let mut h = 0.0;
        for (&n1, &wn1) in h1.nodes.iter().zip(&h1.weights) {
            let wa = base + w0 * (wp.a0 + wp.a1 * z + sq * sa * n1);
            let mut inner = 0.0;
            for (&n2, &wn2) in h2.nodes.iter().zip(&h2.weights) {
                let wb = base + w0 * (wq.a0 + wq.a1 * z + sq * ((sa + c1) * n1 + c2 * n2));
                inner += wn2 * spec.eval(wb);
            }
            h += wn1 * (spec.eval(wa) - inner);
        }
        sum += h;
        sumsq += h * h;
    }
    let mean = sum / n as f64;
    let var = ((sumsq - n as f64 * mean * mean) / (n as f64 - 1.0)).max(0.0);
    (mean, (var / n as f64).sqrt())
}

#[test]
fn certainty_equivalent_inverts_each_utility() {
    let cases: [(UtilitySpec, &[f64]); 6] = [
        (UtilitySpec::Exponential { a: 0.7 }, &[0.3, 1.0, 5.0]),
        (UtilitySpec::Sahara { a: 2.0, b: 1.0, delta: 0.0 }, &[0.3, 1.0, 5.0]),
        (UtilitySpec::HendersonHobson { tau: 0.1 }, &[0.3, 1.0, 5.0]),
        (UtilitySpec::ShortfallPower { q: 1.5 }, &[-2.0, -0.5]),
        (UtilitySpec::TruncatedLinear { m: 4.0 }, &[0.5, 2.0, 3.5]),
        (UtilitySpec::PiecewiseLinear { k1: 2.0, k2: 0.5 }, &[-1.0, 0.5, 3.0]),
    ];
    for (spec, points) in cases {
        for &w in points {
            let ce = oracle::certainty_equivalent(spec, spec.eval(w)).unwrap();
            assert!(
                (ce - w).abs() <= 1e-8 * w.abs().max(1.0),
                "{spec:?}: CE({w}) came back as {ce}"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling and the oracle

#[test]
fn projected_returns_match_scalar_mixture_law() {
    let m = common::light_model();
    let x = [0.5, 0.3, 0.2];
    let n = 100_000;
    let returns = m.sample_returns(11, n);
    let full: Vec<f64> = (0..n)
        .map(|k| {
            let row = &returns[k * m.d()..(k + 1) * m.d()];
            x.iter()
                .zip(row)
                .map(|(&xi, &ri)| xi * (ri - m.r_f()))
                .sum()
        })
        .collect();
    let wp = m.wealth_projection(&x).unwrap();
    let (zs, us) = m.sample_factors(11, n);
    let scalar: Vec<f64> = zs
        .iter()
        .enumerate()
        .map(|(k, &z)| {
            let xu: f64 = x
                .iter()
                .zip(&us[k * m.d()..(k + 1) * m.d()])
                .map(|(&xi, &ui)| xi * ui)
                .sum();
            wp.a0 + wp.a1 * z + z.sqrt() * xu
        })
        .collect();
    let d = ks_stat(full, scalar);
    let critical = 1.628 * (2.0 / n as f64).sqrt();
    assert!(d < critical, "KS statistic {d} above the 1% critical value {critical}");
}

#[test]
fn best_search_estimate_is_monotone_in_candidate_count() {
    let m = common::light_model();
    let (a, w0) = (1.0, 1.0);
    let spec = UtilitySpec::Exponential { a };
    let center = exp_opt::global_optimal(&m, a, w0).unwrap().weights;
    let mut prev = f64::NEG_INFINITY;
    for n_candidates in [50, 200, 1000] {
        let (_, report) =
            oracle::random_search_optimal(&m, spec, w0, &center, n_candidates, 20_000, 13).unwrap();
        assert!(
            report.estimate >= prev,
            "best estimate dropped from {prev} to {} at {n_candidates} candidates",
            report.estimate
        );
        prev = report.estimate;
    }
}

// One risky asset with standard normal return, utility clamped to [0, m]:
// every finite exposure x keeps E U(W) strictly below the supremum m/2, and
// pushing x up only approaches it. The optimizer has nothing to return here;
// this pins the sampling side of that story.
#[test]
fn clamped_utility_supremum_is_approached_not_attained() {
    let (w0, m) = (1.0, 4.0);
    let spec = UtilitySpec::TruncatedLinear { m };
    let n = 2_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let normals: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut prev = f64::NEG_INFINITY;
    for x in [1.0, 10.0, 100.0] {
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for &z in &normals {
            let u = spec.eval(w0 * (1.0 + x * z));
            sum += u;
            sumsq += u * u;
        }
        let est = sum / n as f64;
        let se = (((sumsq - n as f64 * est * est) / (n as f64 - 1.0)) / n as f64).sqrt();
        assert!(est > prev, "estimate not strictly increasing at exposure {x}");
        assert!(
            est < 0.5 * m + 4.0 * se,
            "estimate {est} at exposure {x} exceeds the supremum bound {}",
            0.5 * m
        );
        prev = est;
    }
}

// ---------------------------------------------------------------------------
// Random-model algebra (proptest; margins are structural, not statistical)

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn excess_scalars_respect_cauchy_schwarz(seed in 0u64..1_000_000, d in 2usize..6) {
        let m = common::random_model(seed, d);
        let s = m.scalars();
        prop_assert!(s.a >= 0.0);
        prop_assert!(s.c > 0.0);
        prop_assert!(s.b * s.b <= s.a * s.c * (1.0 + 1e-10) + 1e-16);
    }

    #[test]
    fn sigma_solve_matches_lu_factorization(seed in 0u64..1_000_000, d in 2usize..6) {
        let m = common::random_model(seed, d);
        let rhs: Vec<f64> = (0..d).map(|i| (i as f64 + 1.0) / d as f64).collect();
        let ours = m.solve_sigma(&rhs);
        let mat = nalgebra::DMatrix::from_row_slice(d, d, m.sigma());
        let b = nalgebra::DVector::from_column_slice(&rhs);
        let lu = mat.lu().solve(&b).expect("sigma is positive definite");
        for i in 0..d {
            let scale = ours[i].abs().max(1.0);
            prop_assert!(
                (ours[i] - lu[i]).abs() <= 1e-9 * scale,
                "component {} disagrees: {} vs {}", i, ours[i], lu[i]
            );
        }
    }
}
