//! Gaussian quadrature rules built from Jacobi matrices (Golub-Welsch).
//! The QL sweep below tracks only the first row of the eigenvector matrix,
//! which is all the weights need.

/// Nodes in ascending order with matching weights.
#[derive(Debug, Clone)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Eigen-decompose a symmetric tridiagonal Jacobi matrix (diag `d`, off-diag
/// `e`, e.len() == d.len()-1) by QL with implicit shifts. Weights are
/// mu0 * (first eigenvector component)^2.
fn golub_welsch(mut d: Vec<f64>, mut e: Vec<f64>, mu0: f64) -> QuadRule {
    let n = d.len();
    assert!(n >= 1 && e.len() + 1 == n);
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    QuadRule {
        nodes: order.iter().map(|&i| d[i]).collect(),
        weights: order.iter().map(|&i| mu0 * z[i] * z[i]).collect(),
    }
}

/// n-point rule for E[f(N)] with N standard normal (probabilists' weight,
/// normalized so the weights sum to one).
pub fn hermite_prob(n: usize) -> QuadRule {
    let d = vec![0.0; n];
    let e: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
    golub_welsch(d, e, 1.0)
}

/// n-point rule for the normalized weight x^alpha e^{-x} / Gamma(alpha+1)
/// on (0, inf). Requires alpha > -1.
pub fn gen_laguerre(n: usize, alpha: f64) -> QuadRule {
    assert!(alpha > -1.0);
    let d: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let e: Vec<f64> = (1..n)
        .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
        .collect();
    golub_welsch(d, e, 1.0)
}

/// n-point Gauss-Legendre rule for the plain integral over [0, 1].
pub fn legendre01(n: usize) -> QuadRule {
    let d = vec![0.0; n];
    let e: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let base = golub_welsch(d, e, 2.0);
    QuadRule {
        nodes: base.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect(),
        weights: base.weights.iter().map(|w| 0.5 * w).collect(),
    }
}

/// Gauss-Legendre rule for the plain integral over [lo, hi].
pub fn legendre_on(n: usize, lo: f64, hi: f64) -> QuadRule {
    let base = legendre01(n);
    let len = hi - lo;
    QuadRule {
        nodes: base.nodes.iter().map(|t| lo + len * t).collect(),
        weights: base.weights.iter().map(|w| len * w).collect(),
    }
}
