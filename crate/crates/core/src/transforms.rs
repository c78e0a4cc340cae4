//! Reductions to zero-centred coordinates and the product pivots.
//!
//! A variable with finite upper endpoint `e` is replaced by its endpoint
//! reciprocal `x~ = 1/(e - x)`, which turns a Weibull-type tail into a
//! Pareto-type one. Which coordinates are transformed depends on the case:
//!
//! | case | reduced pair        | scalings          | cone              |
//! |------|---------------------|-------------------|-------------------|
//! | I    | `(X, Y)`            | `(alpha, a)`      | `[-inf,inf] x (0,inf]` |
//! | II   | `(X~, Y~)`          | `(alpha~, a~)`    | `[0,inf] x (0,inf]`    |
//! | III  | `(X, Y~)`           | `(alpha, a~)`     | `[0,inf] x (0,inf]`    |
//! | IV   | `(beta(inf) - X, Y)`| `(alpha, a)`      | `[0,inf] x (0,inf]`    |

use serde::{Deserialize, Serialize};

use crate::classify::{CaseId, ProductLaw, ScalingCombo};
use crate::error::{CevmError, Result};
use crate::evt::ScalingFunction;
use crate::zoo::CevmModel;

/// `1 / (endpoint - x)`.
pub fn tilde(x: f64, endpoint: f64) -> Result<f64> {
    if x.is_nan() || x >= endpoint {
        return Err(CevmError::BeyondEndpoint { x, endpoint });
    }
    Ok(1.0 / (endpoint - x))
}

/// Inverse of [`tilde`]: the original coordinate of a reduced value `v > 0`.
#[inline]
pub fn untilde(v: f64, endpoint: f64) -> f64 {
    endpoint - 1.0 / v
}

/// Scalings of the reduced pair `(X~, Y~)`.
///
/// `alpha~(t) = 1 / (|rho| (beta(inf) - beta(t)))` when `psi2 != 0` and
/// `1 / alpha(t)` otherwise; `a~(t) = 1 / a(t)`. The index `rho` is read off
/// `alpha`.
pub fn tilde_scalings(
    alpha: &ScalingFunction,
    beta: &ScalingFunction,
    a: &ScalingFunction,
    psi2_zero: bool,
) -> Result<(ScalingFunction, ScalingFunction)> {
    if beta.limit_at_infinity.is_none() {
        return Err(CevmError::MissingEndpoint("beta(inf) is needed for the tilde scalings"));
    }
    let rho = alpha.kappa();
    let alpha_tilde = if psi2_zero {
        ScalingFunction::reciprocal(alpha.clone())
    } else {
        if !(rho < 0.0) {
            return Err(CevmError::arg("tilde_scalings with psi2 != 0 needs rho < 0"));
        }
        let gap = ScalingFunction::gap_to_limit(beta.clone(), rho)?;
        ScalingFunction::reciprocal(ScalingFunction::scaled(rho.abs(), gap))
    };
    Ok((alpha_tilde, ScalingFunction::reciprocal(a.clone())))
}

/// Coordinate map from the original pair to the reduced pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reduction {
    Identity,
    Tilde { beta_inf: f64, b_inf: f64 },
    TildeY { b_inf: f64 },
    ReflectX { beta_inf: f64 },
}

impl Reduction {
    pub fn for_case(case: CaseId, beta_inf: Option<f64>, b_inf: Option<f64>) -> Result<Self> {
        let beta = || beta_inf.ok_or(CevmError::MissingEndpoint("beta_inf"));
        let b = || b_inf.ok_or(CevmError::MissingEndpoint("b_inf"));
        Ok(match case {
            CaseId::I => Reduction::Identity,
            CaseId::IIa | CaseId::IIb | CaseId::IIc | CaseId::IId => {
                Reduction::Tilde { beta_inf: beta()?, b_inf: b()? }
            }
            CaseId::III => Reduction::TildeY { b_inf: b()? },
            CaseId::IV => Reduction::ReflectX { beta_inf: beta()? },
            CaseId::Unsupported(r) => return Err(CevmError::Unsupported(r)),
        })
    }

    pub fn forward(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        match *self {
            Reduction::Identity => Ok((x, y)),
            Reduction::Tilde { beta_inf, b_inf } => Ok((tilde(x, beta_inf)?, tilde(y, b_inf)?)),
            Reduction::TildeY { b_inf } => Ok((x, tilde(y, b_inf)?)),
            Reduction::ReflectX { beta_inf } => {
                if x > beta_inf {
                    return Err(CevmError::BeyondEndpoint { x, endpoint: beta_inf });
                }
                Ok((beta_inf - x, y))
            }
        }
    }

    #[inline]
    pub fn inverse(&self, u: f64, v: f64) -> (f64, f64) {
        match *self {
            Reduction::Identity => (u, v),
            Reduction::Tilde { beta_inf, b_inf } => (untilde(u, beta_inf), untilde(v, b_inf)),
            Reduction::TildeY { b_inf } => (u, untilde(v, b_inf)),
            Reduction::ReflectX { beta_inf } => (beta_inf - u, v),
        }
    }

    pub fn cone(&self) -> Cone {
        match self {
            Reduction::Identity => Cone::RealByPositive,
            _ => Cone::NonnegByPositive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cone {
    /// `[-inf, inf] x (0, inf]`
    RealByPositive,
    /// `[0, inf] x (0, inf]`
    NonnegByPositive,
}

/// A model seen through its case reduction.
#[derive(Debug, Clone)]
pub struct ReducedPair {
    pub model: CevmModel,
    pub case: CaseId,
    pub reduction: Reduction,
    /// Scaling of the first reduced coordinate (`alpha` or `alpha~`).
    pub first: ScalingFunction,
    /// Scaling of the second reduced coordinate (`a` or `a~`).
    pub second: ScalingFunction,
    pub cone: Cone,
}

impl ReducedPair {
    /// Reduced coordinates of the model's sample stream for `(seed, n)`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<(f64, f64)> {
        self.model.sample_reduced(seed, n)
    }

    pub fn inverse(&self, reduced: &[(f64, f64)]) -> Vec<(f64, f64)> {
        reduced.iter().map(|&(u, v)| self.reduction.inverse(u, v)).collect()
    }

    pub fn pivot(&self, u: f64, v: f64) -> f64 {
        let p = &self.model.params;
        pivot_from_reduced(self.case, u, v, p.beta_inf.unwrap_or(0.0), p.b_inf.unwrap_or(0.0))
    }
}

pub fn reduce_model(model: &CevmModel) -> Result<ReducedPair> {
    let case = model.case()?;
    let p = &model.params;
    let reduction = Reduction::for_case(case, p.beta_inf, p.b_inf)?;
    let (first, second) = match case {
        CaseId::I | CaseId::IV => (model.alpha.clone(), model.a.clone()),
        CaseId::III => (model.alpha.clone(), ScalingFunction::reciprocal(model.a.clone())),
        _ => tilde_scalings(&model.alpha, &model.beta, &model.a, p.psi2_zero)?,
    };
    Ok(ReducedPair { model: model.clone(), case, reduction, first, second, cone: reduction.cone() })
}

fn checked(value: f64, x: f64, y: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CevmError::PivotSingular { x, y })
    }
}

/// The pivot of `case` evaluated on the original pair.
///
/// Membership is checked against the declared endpoints: `x <= beta_inf`
/// where `X` has an endpoint, `y <= b_inf` where `Y` has one.
pub fn pivot_value(case: CaseId, x: f64, y: f64, beta_inf: f64, b_inf: f64) -> Result<f64> {
    let outside = || CevmError::OutsideSupport { x, y };
    let x_bounded =
        matches!(case, CaseId::IIa | CaseId::IIb | CaseId::IIc | CaseId::IId | CaseId::IV);
    let y_bounded =
        matches!(case, CaseId::IIa | CaseId::IIb | CaseId::IIc | CaseId::IId | CaseId::III);
    if x.is_nan() || y.is_nan() || (x_bounded && x > beta_inf) || (y_bounded && y > b_inf) {
        return Err(outside());
    }
    match case {
        CaseId::I | CaseId::III | CaseId::IV => Ok(x * y),
        CaseId::IIa => checked(1.0 / (beta_inf * b_inf - x * y), x, y),
        CaseId::IIb => checked(1.0 / (x * y), x, y),
        CaseId::IIc => checked(-1.0 / (x * y), x, y),
        CaseId::IId => checked(1.0 / (x * y - beta_inf * b_inf), x, y),
        CaseId::Unsupported(r) => Err(CevmError::Unsupported(r)),
    }
}

/// The pivot of `case` written in reduced coordinates, free of the
/// cancellation in `beta b - xy` near the endpoints.
///
/// For Case II, `1/(beta b - xy) = x~ y~ / (beta x~ + b y~ - 1)`.
#[inline]
pub fn pivot_from_reduced(case: CaseId, u: f64, v: f64, beta_inf: f64, b_inf: f64) -> f64 {
    match case {
        CaseId::I => u * v,
        CaseId::IIa => u * v / (beta_inf * u + b_inf * v - 1.0),
        CaseId::IIb => u * v,
        CaseId::IIc => u * v / (b_inf * v - 1.0),
        CaseId::IId => -(u * v) / (beta_inf * u + b_inf * v - 1.0),
        CaseId::III => u * (b_inf * v - 1.0) / v,
        CaseId::IV => (beta_inf - u) * v,
        CaseId::Unsupported(_) => f64::NAN,
    }
}

/// The normalisation of the pivot named by the product law.
pub fn pivot_scaling(law: &ProductLaw, reduced: &ReducedPair) -> ScalingFunction {
    match law.scaling {
        ScalingCombo::AlphaTimesA | ScalingCombo::AlphaTildeTimesATilde => {
            ScalingFunction::product(reduced.first.clone(), reduced.second.clone())
        }
        ScalingCombo::AlphaTilde => reduced.first.clone(),
        ScalingCombo::ATilde | ScalingCombo::A => reduced.second.clone(),
    }
}
