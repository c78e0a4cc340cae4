//! Bounded distributions used as mixing factors in the model zoo: the angle
//! `W` of a multivariate regularly varying pair, and the coupling factors
//! `U`, `V`.

use serde::{Deserialize, Serialize};

use crate::error::{CevmError, Result};
use crate::quadrature;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundedDist {
    Point {
        value: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Finitely many atoms; `probs` are normalised on use.
    Discrete {
        values: Vec<f64>,
        probs: Vec<f64>,
    },
}

impl BoundedDist {
    pub fn point(value: f64) -> Self {
        BoundedDist::Point { value }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        BoundedDist::Uniform { lo, hi }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BoundedDist::Point { value } if value.is_finite() => Ok(()),
            BoundedDist::Uniform { lo, hi } if lo.is_finite() && hi.is_finite() && lo < hi => {
                Ok(())
            }
            BoundedDist::Discrete { values, probs }
                if !values.is_empty()
                    && values.len() == probs.len()
                    && values.iter().all(|v| v.is_finite())
                    && probs.iter().all(|p| *p >= 0.0 && p.is_finite())
                    && probs.iter().sum::<f64>() > 0.0 =>
            {
                Ok(())
            }
            _ => Err(CevmError::arg(format!("invalid distribution {self:?}"))),
        }
    }

    /// Smallest and largest point of the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            BoundedDist::Point { value } => (*value, *value),
            BoundedDist::Uniform { lo, hi } => (*lo, *hi),
            BoundedDist::Discrete { values, probs } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for (v, p) in values.iter().zip(probs) {
                    if *p > 0.0 {
                        lo = lo.min(*v);
                        hi = hi.max(*v);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Inverse-transform draw from a uniform `u` in `(0, 1)`.
    #[inline]
    pub fn sample(&self, u: f64) -> f64 {
        match self {
            BoundedDist::Point { value } => *value,
            BoundedDist::Uniform { lo, hi } => lo + (hi - lo) * u,
            BoundedDist::Discrete { values, probs } => {
                let total: f64 = probs.iter().sum();
                let target = u * total;
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += p;
                    if target < acc {
                        return *v;
                    }
                }
                values[values.len() - 1]
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            BoundedDist::Point { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            BoundedDist::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            BoundedDist::Discrete { values, probs } => {
                let total: f64 = probs.iter().sum();
                values.iter().zip(probs).filter(|(v, _)| **v <= x).map(|(_, p)| p).sum::<f64>()
                    / total
            }
        }
    }

    /// Points where the cdf jumps or has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            BoundedDist::Point { value } => vec![*value],
            BoundedDist::Uniform { lo, hi } => vec![*lo, *hi],
            BoundedDist::Discrete { values, .. } => values.clone(),
        }
    }

    /// `E[f(V)]`; exact sums for atoms, quadrature for the uniform law.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        self.expect_with_breaks(f, &[])
    }

    /// As [`expect`](Self::expect), splitting the quadrature at the kinks of
    /// `f` listed in `breaks`.
    pub fn expect_with_breaks<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<f64> {
        match self {
            BoundedDist::Point { value } => Ok(f(*value)),
            BoundedDist::Uniform { lo, hi } => {
                let q = quadrature::integrate_pieces(&f, *lo, *hi, breaks, 1e-12 * (hi - lo))?;
                Ok(q.value / (hi - lo))
            }
            BoundedDist::Discrete { values, probs } => {
                let total: f64 = probs.iter().sum();
                Ok(values.iter().zip(probs).map(|(v, p)| p * f(*v)).sum::<f64>() / total)
            }
        }
    }

    /// `E[V^p]` for a nonnegative law.
    pub fn moment(&self, p: f64) -> f64 {
        match self {
            BoundedDist::Point { value } => value.powf(p),
            BoundedDist::Uniform { lo, hi } => {
                if (p + 1.0).abs() < 1e-14 {
                    (hi.ln() - lo.ln()) / (hi - lo)
                } else {
                    (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / ((p + 1.0) * (hi - lo))
                }
            }
            BoundedDist::Discrete { values, probs } => {
                let total: f64 = probs.iter().sum();
                values.iter().zip(probs).map(|(v, q)| q * v.powf(p)).sum::<f64>() / total
            }
        }
    }

    /// Atom representation on `[lo, hi]`: atoms are returned as they are,
    /// the uniform law is replaced by `bins` equal-mass midpoint atoms.
    pub fn atoms(&self, bins: usize) -> Vec<(f64, f64)> {
        match self {
            BoundedDist::Point { value } => vec![(*value, 1.0)],
            BoundedDist::Uniform { lo, hi } => (0..bins)
                .map(|i| (lo + (hi - lo) * (i as f64 + 0.5) / bins as f64, 1.0 / bins as f64))
                .collect(),
            BoundedDist::Discrete { values, probs } => {
                let total: f64 = probs.iter().sum();
                values.iter().zip(probs).map(|(v, p)| (*v, p / total)).collect()
            }
        }
    }
}
