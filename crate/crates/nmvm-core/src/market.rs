//! The one-period NMVM market: X = mu + gamma Z + sqrt(Z) A N with
//! Sigma = A A^T. The model owns a Cholesky factor of Sigma; every derived
//! quantity is a pure function of the stored fields.

use crate::error::{Error, Result};
use crate::linalg::{self, Cholesky};
use crate::mixing::MixingLaw;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Pivot floor for Sigma, relative to its largest diagonal entry.
const PD_TOL_REL: f64 = 1e-12;

/// Serialized form of a model document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub d: usize,
    pub mu: Vec<f64>,
    pub gamma: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub r_f: f64,
    pub law: MixingLaw,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ModelDoc", into = "ModelDoc")]
pub struct NmvmModel {
    d: usize,
    mu: Vec<f64>,
    gamma: Vec<f64>,
    sigma: Vec<f64>,
    r_f: f64,
    law: MixingLaw,
    chol: Cholesky,
}

/// A = gamma' Sigma^-1 gamma, B = gamma' Sigma^-1 (mu - 1 r_f),
/// C = (mu - 1 r_f)' Sigma^-1 (mu - 1 r_f).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelScalars {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Coefficients of W(x) = W0(1+r_f) + W0 (a0 + a1 Z + a2 sqrt(Z) N).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WealthProjection {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

/// eta = alpha + beta Z + sigma_eta sqrt(Z) N, the return of the unit-cost
/// portfolio along Sigma^-1 v; alpha + beta EZ = 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EtaCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub sigma_eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationLevel {
    /// Enough structure for the exponential-utility closed form.
    Exponential,
    /// Additionally requires the finite-EZ machinery of the concave route.
    Concave,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub level: ValidationLevel,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl TryFrom<ModelDoc> for NmvmModel {
    type Error = Error;
    fn try_from(doc: ModelDoc) -> Result<Self> {
        let ModelDoc {
            d,
            mu,
            gamma,
            sigma,
            r_f,
            law,
        } = doc;
        if mu.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "d = {d} but mu has {} entries",
                mu.len()
            )));
        }
        if sigma.len() != d || sigma.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "sigma must be {d}x{d} to match d"
            )));
        }
        let flat: Vec<f64> = sigma.into_iter().flatten().collect();
        NmvmModel::new(mu, gamma, flat, r_f, law)
    }
}

impl From<NmvmModel> for ModelDoc {
    fn from(m: NmvmModel) -> ModelDoc {
        let d = m.d;
        ModelDoc {
            d,
            mu: m.mu,
            gamma: m.gamma,
            sigma: (0..d)
                .map(|i| m.sigma[i * d..(i + 1) * d].to_vec())
                .collect(),
            r_f: m.r_f,
            law: m.law,
        }
    }
}

impl NmvmModel {
    /// Build and structurally validate a model; `sigma` is row-major d*d.
    pub fn new(
        mu: Vec<f64>,
        gamma: Vec<f64>,
        sigma: Vec<f64>,
        r_f: f64,
        law: MixingLaw,
    ) -> Result<Self> {
        let d = mu.len();
        if d == 0 {
            return Err(Error::InvalidParameter("need at least one asset".into()));
        }
        if gamma.len() != d || sigma.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "mu has {d} assets but gamma has {} and sigma {} entries",
                gamma.len(),
                sigma.len()
            )));
        }
        if !r_f.is_finite()
            || mu.iter().any(|v| !v.is_finite())
            || gamma.iter().any(|v| !v.is_finite())
            || sigma.iter().any(|v| !v.is_finite())
        {
            return Err(Error::InvalidParameter(
                "model parameters must be finite".into(),
            ));
        }
        law.validate()?;
        if !linalg::is_symmetric(&sigma, d, 1e-12) {
            return Err(Error::InvalidParameter("sigma is not symmetric".into()));
        }
        let chol = Cholesky::factor(&sigma, d, PD_TOL_REL)?;
        let model = NmvmModel {
            d,
            mu,
            gamma,
            sigma,
            r_f,
            law,
            chol,
        };
        if model.m_tilde().iter().all(|&v| v == 0.0) {
            return Err(Error::Validation(
                "mu equals 1 r_f exactly; the excess-return direction is undefined".into(),
            ));
        }
        Ok(model)
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn mu(&self) -> &[f64] {
        &self.mu
    }
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
    pub fn r_f(&self) -> f64 {
        self.r_f
    }
    pub fn law(&self) -> &MixingLaw {
        &self.law
    }
    pub fn chol(&self) -> &Cholesky {
        &self.chol
    }

    /// mu - 1 r_f.
    pub fn m_tilde(&self) -> Vec<f64> {
        self.mu.iter().map(|&m| m - self.r_f).collect()
    }

    /// Sigma^-1 w.
    pub fn solve_sigma(&self, w: &[f64]) -> Vec<f64> {
        self.chol.solve(w)
    }

    pub fn validate(&self, level: ValidationLevel) -> ValidationReport {
        let mut failures = Vec::new();
        if let Err(e) = self.law.validate() {
            failures.push(format!("mixing law invalid: {e}"));
        }
        let mt = self.m_tilde();
        if mt.iter().all(|&v| v == 0.0) {
            failures.push("mu - 1 r_f = 0: excess-return direction undefined".into());
        }
        if level == ValidationLevel::Concave {
            let mean = self.law.moments().mean;
            if !mean.is_finite() {
                if self.gamma.iter().any(|&g| g != 0.0) {
                    failures.push(
                        "mixing law has infinite mean: with a nonzero skew vector, \
                         expected utility is unbounded below along short positions \
                         against the skew direction, so the concave problem is \
                         ill-posed"
                            .into(),
                    );
                } else {
                    failures.push(
                        "mixing law has infinite mean; the concave route needs finite EZ".into(),
                    );
                }
            } else {
                let v = self.excess_vector().unwrap_or_default();
                if v.iter().all(|&c| c == 0.0) {
                    failures.push("mu - 1 r_f + gamma EZ = 0: no excess return to trade".into());
                }
            }
        }
        ValidationReport { level, failures }
    }

    pub fn scalars(&self) -> ModelScalars {
        let mt = self.m_tilde();
        let sg = self.chol.solve(&self.gamma);
        let sm = self.chol.solve(&mt);
        ModelScalars {
            a: linalg::dot(&self.gamma, &sg),
            b: linalg::dot(&self.gamma, &sm),
            c: linalg::dot(&mt, &sm),
        }
    }

    /// v = mu - 1 r_f + gamma EZ.
    pub fn excess_vector(&self) -> Result<Vec<f64>> {
        let mean = self.law.moments().mean;
        if !mean.is_finite() {
            return Err(Error::UnsupportedModel(
                "mixing law has infinite mean; v = mu - 1 r_f + gamma EZ is undefined".into(),
            ));
        }
        Ok(self
            .m_tilde()
            .iter()
            .zip(&self.gamma)
            .map(|(&m, &g)| m + g * mean)
            .collect())
    }

    pub fn wealth_projection(&self, x: &[f64]) -> Result<WealthProjection> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "portfolio has {} entries for {} assets",
                x.len(),
                self.d
            )));
        }
        let ltx = self.chol.lt_mul(x);
        Ok(WealthProjection {
            a0: linalg::dot(x, &self.m_tilde()),
            a1: linalg::dot(x, &self.gamma),
            a2: linalg::dot(&ltx, &ltx).sqrt(),
        })
    }

    pub fn eta_coefficients(&self) -> Result<EtaCoefficients> {
        let v = self.excess_vector()?;
        let sv = self.chol.solve(&v);
        let vsv = linalg::dot(&v, &sv);
        if vsv <= 0.0 {
            return Err(Error::Validation(
                "v' Sigma^-1 v is not positive; the excess direction is degenerate".into(),
            ));
        }
        Ok(EtaCoefficients {
            alpha: linalg::dot(&self.m_tilde(), &sv) / vsv,
            beta: linalg::dot(&self.gamma, &sv) / vsv,
            sigma_eta: 1.0 / vsv.sqrt(),
        })
    }

    /// Common factor draws: n mixing values Z and the correlated Gaussian
    /// parts U = A N, row-major n x d. One ChaCha8 stream seeded by `seed`;
    /// per draw the order is Z first, then the d standard normals. Shared by
    /// `sample_returns` and the Monte-Carlo oracle so that portfolios can be
    /// compared on common random numbers.
    pub fn sample_factors(&self, seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sampler = self.law.sampler().expect("law validated at construction");
        let mut zs = Vec::with_capacity(n);
        let mut us = Vec::with_capacity(n * self.d);
        let mut normals = vec![0.0; self.d];
        for _ in 0..n {
            zs.push(sampler.draw(&mut rng));
            for slot in normals.iter_mut() {
                *slot = StandardNormal.sample(&mut rng);
            }
            us.extend_from_slice(&self.chol.l_mul(&normals));
        }
        (zs, us)
    }

    /// n joint return draws X = mu + gamma Z + sqrt(Z) A N, row-major n x d.
    pub fn sample_returns(&self, seed: u64, n: usize) -> Vec<f64> {
        let (zs, us) = self.sample_factors(seed, n);
        let mut out = vec![0.0; n * self.d];
        for (k, &z) in zs.iter().enumerate() {
            let sq = z.sqrt();
            for i in 0..self.d {
                out[k * self.d + i] = self.mu[i] + self.gamma[i] * z + sq * us[k * self.d + i];
            }
        }
        out
    }

    /// Draw one return vector from externally supplied factors.
    pub fn return_from_factors(&self, z: f64, u_row: &[f64]) -> Vec<f64> {
        let sq = z.sqrt();
        (0..self.d)
            .map(|i| self.mu[i] + self.gamma[i] * z + sq * u_row[i])
            .collect()
    }
}
