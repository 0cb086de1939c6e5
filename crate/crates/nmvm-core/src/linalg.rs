//! Dense symmetric linear algebra on flat row-major matrices: Cholesky
//! factorization with a pivot floor, triangular solves, and small helpers.
//! Dimensions here are tiny (d <= 20), so plain loops are adequate.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &[f64], d: usize, x: &[f64]) -> Vec<f64> {
    (0..d).map(|i| dot(&m[i * d..(i + 1) * d], x)).collect()
}

/// Relative symmetry check: |a_ij - a_ji| <= tol * max|a|.
pub fn is_symmetric(m: &[f64], d: usize, tol: f64) -> bool {
    let scale = m.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    for i in 0..d {
        for j in 0..i {
            if (m[i * d + j] - m[j * d + i]).abs() > tol * scale.max(1e-300) {
                return false;
            }
        }
    }
    true
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    d: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factor `m` (row-major, d x d). Every pivot (the value under the square
    /// root) must exceed `pivot_tol_rel` times the largest diagonal entry.
    pub fn factor(m: &[f64], d: usize, pivot_tol_rel: f64) -> Result<Self> {
        if m.len() != d * d || d == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} matrix, got {} entries",
                m.len()
            )));
        }
        let max_diag = (0..d).fold(0.0f64, |s, i| s.max(m[i * d + i]));
        if max_diag <= 0.0 {
            return Err(Error::NotPositiveDefinite(
                "no positive diagonal entry".into(),
            ));
        }
        let floor = pivot_tol_rel * max_diag;
        let mut l = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let mut s = m[i * d + j];
                for k in 0..j {
                    s -= l[i * d + k] * l[j * d + k];
                }
                if i == j {
                    if s <= floor {
                        return Err(Error::NotPositiveDefinite(format!(
                            "pivot {s:.3e} at row {i} is not above {floor:.3e}"
                        )));
                    }
                    l[i * d + j] = s.sqrt();
                } else {
                    l[i * d + j] = s / l[j * d + j];
                }
            }
        }
        Ok(Cholesky { d, l })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Solve (L L^T) x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let d = self.d;
        assert_eq!(b.len(), d);
        let mut y = b.to_vec();
        for i in 0..d {
            for k in 0..i {
                y[i] = y[i] - self.l[i * d + k] * y[k];
            }
            y[i] /= self.l[i * d + i];
        }
        for i in (0..d).rev() {
            for k in i + 1..d {
                y[i] = y[i] - self.l[k * d + i] * y[k];
            }
            y[i] /= self.l[i * d + i];
        }
        y
    }

    /// y = L x (used to correlate standard normal draws).
    pub fn l_mul(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        (0..d)
            .map(|i| (0..=i).map(|k| self.l[i * d + k] * x[k]).sum())
            .collect()
    }

    /// x^T L, i.e. L^T x (projects a portfolio onto the normal factor).
    pub fn lt_mul(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        (0..d)
            .map(|k| (k..d).map(|i| self.l[i * d + k] * x[i]).sum())
            .collect()
    }
}

/// u^T M^{-1} w through an existing factor.
pub fn quad_inv(chol: &Cholesky, u: &[f64], w: &[f64]) -> f64 {
    dot(u, &chol.solve(w))
}
