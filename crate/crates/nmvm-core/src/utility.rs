//! Utility functions over terminal wealth. Evaluation sticks to cancellation
//! free forms: the saturating families are computed through the conjugate
//! expression b^2/(s - w) instead of w + s when w < 0.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum UtilitySpec {
    /// -e^{-a w}
    Exponential { a: f64 },
    /// Risk tolerance sqrt(b^2 + (w - delta)^2)/a; bounded above iff a > 1.
    Sahara {
        a: f64,
        b: f64,
        #[serde(default)]
        delta: f64,
    },
    /// (1/tau)(1 + tau w - sqrt(1 + tau^2 w^2))
    HendersonHobson { tau: f64 },
    /// -(w^-)^q
    ShortfallPower { q: f64 },
    /// w clamped to [0, m]; bounded below, so outside Assumption 1.
    TruncatedLinear { m: f64 },
    /// slope k1 below zero, k2 above; concave iff k1 >= k2.
    PiecewiseLinear { k1: f64, k2: f64 },
}

/// Growth order of -U(w) as w -> -infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeftTail {
    Bounded,
    /// -U(w) ~ |w|^p
    Power(f64),
    /// -U(w) ~ e^{a |w|}
    ExpCoef(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct Assumption1Report {
    pub monotone: bool,
    pub concave: bool,
    pub bounded_above: bool,
    pub diverges_below: bool,
}

impl Assumption1Report {
    pub fn passes(&self) -> bool {
        self.monotone && self.concave && self.bounded_above && self.diverges_below
    }
}

impl UtilitySpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            UtilitySpec::Exponential { a } => a > 0.0 && a.is_finite(),
            UtilitySpec::Sahara { a, b, delta } => {
                a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() && delta.is_finite()
            }
            UtilitySpec::HendersonHobson { tau } => tau > 0.0 && tau.is_finite(),
            UtilitySpec::ShortfallPower { q } => q > 1.0 && q.is_finite(),
            UtilitySpec::TruncatedLinear { m } => m > 0.0 && m.is_finite(),
            UtilitySpec::PiecewiseLinear { k1, k2 } => {
                k1 > 0.0 && k2 > 0.0 && k1.is_finite() && k2.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "utility parameters out of range: {self:?}"
            )))
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        match *self {
            UtilitySpec::Exponential { a } => -(-a * w).exp(),
            UtilitySpec::Sahara { a, b, delta } => {
                let wb = w - delta;
                let s = b.hypot(wb);
                // base = wb + s, rewritten for wb < 0 where the sum cancels
                let base = if wb >= 0.0 { wb + s } else { b * b / (s - wb) };
                if (a - 1.0).abs() > 1e-12 {
                    -(wb + a * s) * base.powf(-a) / (a * a - 1.0)
                } else {
                    0.5 * (base / b).ln() - 0.25 * (b / base) * (b / base)
                }
            }
            UtilitySpec::HendersonHobson { tau } => {
                // (1/tau)(1 + tau w - sqrt(1 + tau^2 w^2)), via its conjugate
                2.0 * w / (1.0 + tau * w + (tau * w).hypot(1.0))
            }
            UtilitySpec::ShortfallPower { q } => {
                if w >= 0.0 {
                    0.0
                } else {
                    -(-w).powf(q)
                }
            }
            UtilitySpec::TruncatedLinear { m } => w.clamp(0.0, m),
            UtilitySpec::PiecewiseLinear { k1, k2 } => {
                if w < 0.0 {
                    k1 * w
                } else {
                    k2 * w
                }
            }
        }
    }

    pub fn left_tail(&self) -> LeftTail {
        match *self {
            UtilitySpec::Exponential { a } => LeftTail::ExpCoef(a),
            UtilitySpec::Sahara { a, .. } => LeftTail::Power(1.0 + a),
            UtilitySpec::HendersonHobson { .. } => LeftTail::Power(1.0),
            UtilitySpec::ShortfallPower { q } => LeftTail::Power(q),
            UtilitySpec::TruncatedLinear { .. } => LeftTail::Bounded,
            UtilitySpec::PiecewiseLinear { .. } => LeftTail::Power(1.0),
        }
    }

    /// Growth order of U(w) as w -> +infinity; 0 for bounded or logarithmic
    /// growth (any positive mixing moment covers those).
    pub fn right_tail_order(&self) -> f64 {
        match *self {
            UtilitySpec::Exponential { .. }
            | UtilitySpec::HendersonHobson { .. }
            | UtilitySpec::ShortfallPower { .. }
            | UtilitySpec::TruncatedLinear { .. } => 0.0,
            UtilitySpec::Sahara { a, .. } => {
                if a >= 1.0 {
                    0.0
                } else {
                    1.0 - a
                }
            }
            UtilitySpec::PiecewiseLinear { .. } => 1.0,
        }
    }

    pub fn bounded_above(&self) -> bool {
        match *self {
            UtilitySpec::Exponential { .. }
            | UtilitySpec::HendersonHobson { .. }
            | UtilitySpec::ShortfallPower { .. }
            | UtilitySpec::TruncatedLinear { .. } => true,
            UtilitySpec::Sahara { a, .. } => a > 1.0,
            UtilitySpec::PiecewiseLinear { .. } => false,
        }
    }

    pub fn strictly_concave(&self) -> bool {
        matches!(
            self,
            UtilitySpec::Exponential { .. }
                | UtilitySpec::Sahara { .. }
                | UtilitySpec::HendersonHobson { .. }
        )
    }

    pub fn diverges_below(&self) -> bool {
        !matches!(self, UtilitySpec::TruncatedLinear { .. })
    }

    /// Probe-based check of the standing utility assumption (nondecreasing,
    /// concave, bounded above, divergent at -infinity).
    pub fn validate_assumption1(&self) -> Assumption1Report {
        // asinh-spaced grid covering about +-8e4 with dense center
        let grid: Vec<f64> = (0..1000)
            .map(|i| (-12.0 + 24.0 * i as f64 / 999.0).sinh())
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&w| self.eval(w)).collect();
        let scale = vals
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |s, v| s.max(v.abs()));
        let slack = 1e-12 * (1.0 + scale);
        let monotone = vals.windows(2).all(|p| p[1] >= p[0] - slack);
        let concave = grid
            .windows(3)
            .zip(vals.windows(3))
            .all(|(w, u)| {
                // an overflowed endpoint puts the chord at -inf: nothing to check
                if !u[0].is_finite() || !u[2].is_finite() {
                    return true;
                }
                let mid = self.eval(0.5 * (w[0] + w[2]));
                // chord through the outer points, evaluated at their midpoint
                let t = (0.5 * (w[0] + w[2]) - w[0]) / (w[2] - w[0]);
                mid >= u[0] + t * (u[2] - u[0]) - slack
            });
        let inc1 = self.eval(1e6) - self.eval(1e4);
        let inc2 = self.eval(1e8) - self.eval(1e6);
        let bounded_above = inc2 <= 0.5 * inc1 + 1e-12 * (1.0 + self.eval(1e4).abs());
        let diverges_below = self.eval(-1e8) < -1e6;
        Assumption1Report {
            monotone,
            concave,
            bounded_above,
            diverges_below,
        }
    }

    /// Smallest w in [-1e6, 1e6] with U(w) >= target, to 1e-10; utilities are
    /// nondecreasing and continuous so bisection lands on the leftmost
    /// crossing of a plateau.
    pub fn certainty_equivalent(&self, target: f64) -> Result<f64> {
        let (mut lo, mut hi) = (-1e6, 1e6);
        if !target.is_finite() {
            return Err(Error::Range(format!(
                "expected utility {target} has no finite certainty equivalent"
            )));
        }
        if self.eval(lo) >= target {
            return Err(Error::Range(
                "certainty equivalent below the search range [-1e6, 1e6]".into(),
            ));
        }
        if self.eval(hi) < target {
            return Err(Error::Range(
                "certainty equivalent above the search range [-1e6, 1e6]".into(),
            ));
        }
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
