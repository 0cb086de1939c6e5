//! Scalar special functions: ln Gamma and the modified Bessel function of
//! the second kind K_nu, the numerical core of the mixing-law Laplace
//! transforms. Accuracy target 1e-10 relative on the parameter ranges the
//! library uses (nu up to ~25, x up to ~700).

const EPS: f64 = 1.0e-16;
const MAX_ITER: usize = 20_000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Gamma(x)| for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Temme series for (e^x K_mu(x), e^x K_{mu+1}(x)), |mu| <= 1/2, 0 < x <= 2.
fn k_pair_series(mu: f64, x: f64) -> (f64, f64) {
    let x2 = 0.5 * x;
    let mu2 = mu * mu;
    let pimu = std::f64::consts::PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let gampl = (-ln_gamma(1.0 + mu)).exp();
    let gammi = (-ln_gamma(1.0 - mu)).exp();
    // gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu))/(2 mu), limit -euler_gamma at mu=0
    let gam1 = if mu.abs() < 1.0e-5 {
        -(EULER_GAMMA - 0.042_002_635_034_095_24 * mu2)
    } else {
        (gammi - gampl) / (2.0 * mu)
    };
    let gam2 = 0.5 * (gammi + gampl);

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..=MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    let scale = x.exp();
    (sum * scale, sum1 * (2.0 / x) * scale)
}

/// Steed/Thompson-Barnett CF2 for (e^x K_mu(x), e^x K_{mu+1}(x)), |mu| <= 1/2, x > 2.
fn k_pair_cf2(mu: f64, x: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = delh;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..=MAX_ITER {
        a -= 2.0 * (i as f64 - 1.0);
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h = a1 * h;
    let kmu = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let kmu1 = kmu * (mu + x + 0.5 - h) / x;
    (kmu, kmu1)
}

/// ln(e^x K_nu(x)): the scaled Bessel K in log form. Valid for any real nu
/// (K is even in nu) and x > 0.
pub fn ln_bessel_k_scaled(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    assert!(x > 0.0, "bessel k requires x > 0");
    let l = (nu + 0.5).floor() as usize;
    let mu = nu - l as f64;
    let (mut k0, mut k1) = if x <= 2.0 {
        k_pair_series(mu, x)
    } else {
        k_pair_cf2(mu, x)
    };
    let mut log_scale = 0.0f64;
    // upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v, rescaled to avoid overflow
    for j in 0..l {
        let v = mu + 1.0 + j as f64;
        let k2 = k0 + (2.0 * v / x) * k1;
        k0 = k1;
        k1 = k2;
        if k1 > 1.0e250 {
            k0 *= 1.0e-250;
            k1 *= 1.0e-250;
            log_scale += 250.0 * std::f64::consts::LN_10;
        }
    }
    // after l steps k0 = K_{mu+l} = K_nu (k1 runs one order ahead)
    k0.ln() + log_scale
}

/// ln K_nu(x).
pub fn ln_bessel_k(nu: f64, x: f64) -> f64 {
    ln_bessel_k_scaled(nu, x) - x
}

/// e^x K_nu(x).
pub fn bessel_k_scaled(nu: f64, x: f64) -> f64 {
    ln_bessel_k_scaled(nu, x).exp()
}

/// K_nu(x).
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    ln_bessel_k(nu, x).exp()
}
