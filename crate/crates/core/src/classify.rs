//! Case analysis for the product `XY`.
//!
//! The sign of `rho` (index of the `X` scaling `alpha`) and of `gamma`
//! (index of the `Y` scaling `a`), together with the upper endpoints
//! `beta(inf)` of `X` and `b(inf)` of `Y`, determine which transformation of
//! `XY` has a regularly varying tail:
//!
//! | case  | signs                         | pivot                        | index              |
//! |-------|-------------------------------|------------------------------|--------------------|
//! | I     | rho > 0, gamma > 0            | `XY`                         | `-1/(rho+gamma)`   |
//! | II(a) | both < 0, endpoints > 0       | `1/(beta b - XY)`            | `-1/|rho|`         |
//! | II(b) | both < 0, endpoints = 0       | `1/(XY)`                     | `-1/(|rho|+|gamma|)` |
//! | II(c) | both < 0, `beta = 0 < b`      | `-1/(XY)`                    | `-1/|rho|`         |
//! | II(d) | both < 0, endpoints < 0       | `1/(XY - beta b)`            | `-1/|rho|`         |
//! | III   | rho = -gamma > 0, `b > 0`     | `XY`                         | `-1/|gamma|`       |
//! | IV    | rho < 0 < gamma, `beta > 0`   | `XY`                         | `-1/gamma`         |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CevmError, Result};
use crate::evt::RvIndex;

/// Declared parameters of a model instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub rho: f64,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_inf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_inf: Option<f64>,
    #[serde(default)]
    pub psi2_zero: bool,
    /// Is `alpha~(t) / a~(t)` bounded.
    #[serde(default)]
    pub alpha_over_a_bounded: bool,
    /// Does `alpha(t) ~ 1/a(t)` hold.
    #[serde(default)]
    pub alpha_sim_recip_a: bool,
}

impl ModelParams {
    pub fn new(rho: f64, gamma: f64) -> Self {
        Self {
            rho,
            gamma,
            beta_inf: None,
            b_inf: None,
            psi2_zero: false,
            alpha_over_a_bounded: false,
            alpha_sim_recip_a: false,
        }
    }

    pub fn with_endpoints(mut self, beta_inf: Option<f64>, b_inf: Option<f64>) -> Self {
        self.beta_inf = beta_inf;
        self.b_inf = b_inf;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rho.is_finite() || !self.gamma.is_finite() {
            return Err(CevmError::InvalidParameters("rho and gamma must be finite".into()));
        }
        for (name, v) in [("beta_inf", self.beta_inf), ("b_inf", self.b_inf)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(CevmError::InvalidParameters(format!("{name} must be finite")));
                }
            }
        }
        if self.gamma < 0.0 && self.b_inf.is_none() {
            return Err(CevmError::InvalidParameters(
                "gamma < 0 requires the upper endpoint b_inf".into(),
            ));
        }
        if self.rho < 0.0 && self.beta_inf.is_none() {
            return Err(CevmError::InvalidParameters(
                "rho < 0 requires the upper endpoint beta_inf".into(),
            ));
        }
        Ok(())
    }
}

/// Why a parameter combination has no product result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnsupportedReason {
    GammaZero,
    RhoZero,
    /// `beta(inf) > 0`, `b(inf) = 0`: regular variation is around one, the
    /// product needs the behaviour of `X` around zero.
    MixedEndpointXPositiveYZero,
    MixedEndpointXNegativeYPositive,
    /// Case III with `b(inf) <= 0`.
    Case3Endpoint,
    /// Case III without `alpha ~ 1/a` (which forces `rho = -gamma`).
    Case3Scaling,
    /// Case IV with `beta(inf) <= 0`.
    Case4Endpoint,
    /// Case II(a)/(d) with `gamma > rho`, or `gamma = rho` and an unbounded
    /// `alpha~/a~`.
    Case2RatioUnbounded,
    /// Remaining endpoint sign pairs with both factors taking negative values.
    EndpointSignsNotCovered,
}

impl UnsupportedReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnsupportedReason::GammaZero => "gamma-zero",
            UnsupportedReason::RhoZero => "rho-zero",
            UnsupportedReason::MixedEndpointXPositiveYZero => "mixed-endpoint-x-positive-y-zero",
            UnsupportedReason::MixedEndpointXNegativeYPositive => {
                "mixed-endpoint-x-negative-y-positive"
            }
            UnsupportedReason::Case3Endpoint => "case3-endpoint",
            UnsupportedReason::Case3Scaling => "case3-scaling",
            UnsupportedReason::Case4Endpoint => "case4-endpoint",
            UnsupportedReason::Case2RatioUnbounded => "case2-ratio-unbounded",
            UnsupportedReason::EndpointSignsNotCovered => "endpoint-signs-not-covered",
        }
    }
}

impl fmt::Display for UnsupportedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    I,
    IIa,
    IIb,
    IIc,
    IId,
    III,
    IV,
    Unsupported(UnsupportedReason),
}

impl CaseId {
    pub fn is_supported(self) -> bool {
        !matches!(self, CaseId::Unsupported(_))
    }

    pub fn is_case2(self) -> bool {
        matches!(self, CaseId::IIa | CaseId::IIb | CaseId::IIc | CaseId::IId)
    }

    pub fn label(self) -> String {
        match self {
            CaseId::I => "I".into(),
            CaseId::IIa => "II(a)".into(),
            CaseId::IIb => "II(b)".into(),
            CaseId::IIc => "II(c)".into(),
            CaseId::IId => "II(d)".into(),
            CaseId::III => "III".into(),
            CaseId::IV => "IV".into(),
            CaseId::Unsupported(r) => format!("unsupported({r})"),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Transformation of `XY` whose right tail is regularly varying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pivot {
    /// `XY`
    Product,
    /// `1 / (beta(inf) b(inf) - XY)`
    InvGap,
    /// `1 / (XY)`
    InvProduct,
    /// `-1 / (XY)`
    NegInvProduct,
    /// `1 / (XY - beta(inf) b(inf))`; `1/(XY - 1)` for endpoints `-1`.
    InvProductMinusOne,
}

/// Which scaling normalises the pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingCombo {
    AlphaTimesA,
    AlphaTilde,
    AlphaTildeTimesATilde,
    ATilde,
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    /// Asserted by the declared parameters.
    Declared,
    /// Can be tested on the model's marginals or on samples.
    Checkable,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypothesisKind {
    /// `lim_eps lim sup_t t P[|X|/alpha(t) > z/eps] = 0`, implied by a finite
    /// moment of order `sufficient_moment`.
    TailCondition {
        sufficient_moment: f64,
    },
    /// `E[X~^p] < inf` for some `p > exponent`.
    MomentXTilde {
        exponent: f64,
    },
    /// `E[X^p] < inf` for some `p > exponent`.
    MomentX {
        exponent: f64,
    },
    GammaBelowRho,
    RatioBounded,
    AlphaSimRecipA,
    XNonnegative,
    YNonnegative,
    XBetweenZeroAndEndpoint,
    EndpointPositive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub kind: HypothesisKind,
    pub status: HypothesisStatus,
}

impl Hypothesis {
    fn new(name: impl Into<String>, kind: HypothesisKind, status: HypothesisStatus) -> Self {
        Self { name: name.into(), kind, status }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductLaw {
    pub case: CaseId,
    pub pivot: Pivot,
    pub rv_index: RvIndex,
    pub scaling: ScalingCombo,
    pub hypotheses: Vec<Hypothesis>,
}

impl ProductLaw {
    /// Positive tail exponent `alpha` in `P[pivot > x] ~ x^{-alpha}`.
    pub fn tail_exponent(&self) -> f64 {
        -self.rv_index.0
    }

    /// The Hill parameter `xi = 1 / tail exponent`.
    pub fn xi(&self) -> f64 {
        1.0 / self.tail_exponent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

fn sign(v: f64, tol: f64) -> Sign {
    if v.abs() <= tol {
        Sign::Zero
    } else if v > 0.0 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

pub fn classify(p: &ModelParams) -> Result<CaseId> {
    classify_with_tolerance(p, 0.0)
}

/// As [`classify`], treating endpoints with `|v| <= endpoint_tol` as zero.
pub fn classify_with_tolerance(p: &ModelParams, endpoint_tol: f64) -> Result<CaseId> {
    p.validate()?;
    use UnsupportedReason as R;
    let (rho, gamma) = (p.rho, p.gamma);
    if gamma == 0.0 {
        return Ok(CaseId::Unsupported(R::GammaZero));
    }
    if rho == 0.0 {
        return Ok(CaseId::Unsupported(R::RhoZero));
    }
    let endpoint = |v: Option<f64>| v.map(|v| sign(v, endpoint_tol));
    let case = match (rho > 0.0, gamma > 0.0) {
        (true, true) => CaseId::I,
        (true, false) => match endpoint(p.b_inf) {
            Some(Sign::Pos) => {
                if p.alpha_sim_recip_a && rho == -gamma {
                    CaseId::III
                } else {
                    CaseId::Unsupported(R::Case3Scaling)
                }
            }
            _ => CaseId::Unsupported(R::Case3Endpoint),
        },
        (false, true) => match endpoint(p.beta_inf) {
            Some(Sign::Pos) => CaseId::IV,
            _ => CaseId::Unsupported(R::Case4Endpoint),
        },
        (false, false) => {
            let ratio_ok = gamma < rho || (gamma == rho && p.alpha_over_a_bounded);
            // validate() guarantees both endpoints here
            match (endpoint(p.beta_inf), endpoint(p.b_inf)) {
                (Some(Sign::Pos), Some(Sign::Pos)) if ratio_ok => CaseId::IIa,
                (Some(Sign::Neg), Some(Sign::Neg)) if ratio_ok => CaseId::IId,
                (Some(Sign::Pos), Some(Sign::Pos)) | (Some(Sign::Neg), Some(Sign::Neg)) => {
                    CaseId::Unsupported(R::Case2RatioUnbounded)
                }
                (Some(Sign::Zero), Some(Sign::Zero)) => CaseId::IIb,
                (Some(Sign::Zero), Some(Sign::Pos)) => CaseId::IIc,
                (Some(Sign::Pos), Some(Sign::Zero)) => {
                    CaseId::Unsupported(R::MixedEndpointXPositiveYZero)
                }
                (Some(Sign::Neg), Some(Sign::Pos)) => {
                    CaseId::Unsupported(R::MixedEndpointXNegativeYPositive)
                }
                _ => CaseId::Unsupported(R::EndpointSignsNotCovered),
            }
        }
    };
    Ok(case)
}

pub fn product_prediction(case: CaseId, p: &ModelParams) -> Result<ProductLaw> {
    let (rho, gamma) = (p.rho, p.gamma);
    let (pivot, index, scaling) = match case {
        CaseId::I => (Pivot::Product, -1.0 / (gamma + rho), ScalingCombo::AlphaTimesA),
        CaseId::IIa => (Pivot::InvGap, -1.0 / rho.abs(), ScalingCombo::AlphaTilde),
        CaseId::IIb => (
            Pivot::InvProduct,
            -1.0 / (gamma.abs() + rho.abs()),
            ScalingCombo::AlphaTildeTimesATilde,
        ),
        CaseId::IIc => (Pivot::NegInvProduct, -1.0 / rho.abs(), ScalingCombo::AlphaTilde),
        CaseId::IId => (Pivot::InvProductMinusOne, -1.0 / rho.abs(), ScalingCombo::AlphaTilde),
        CaseId::III => (Pivot::Product, -1.0 / gamma.abs(), ScalingCombo::ATilde),
        CaseId::IV => (Pivot::Product, -1.0 / gamma, ScalingCombo::A),
        CaseId::Unsupported(r) => return Err(CevmError::Unsupported(r)),
    };
    Ok(ProductLaw {
        case,
        pivot,
        rv_index: RvIndex(index),
        scaling,
        hypotheses: hypotheses_report(case, p),
    })
}

/// Hypotheses of the theorem behind `case`, each tagged with how it can be
/// established.
pub fn hypotheses_report(case: CaseId, p: &ModelParams) -> Vec<Hypothesis> {
    use HypothesisKind as K;
    use HypothesisStatus::{Checkable, Declared, Unknown};
    let (rho, gamma) = (p.rho, p.gamma);
    let ratio = || {
        if gamma < rho {
            Hypothesis::new("gamma < rho", K::GammaBelowRho, Declared)
        } else {
            let status = if p.alpha_over_a_bounded { Declared } else { Unknown };
            Hypothesis::new("alpha~/a~ bounded", K::RatioBounded, status)
        }
    };
    let moment_xt = |e: f64| {
        Hypothesis::new(
            format!("E[X~^(p)] < inf for p > {e}"),
            K::MomentXTilde { exponent: e },
            Checkable,
        )
    };
    match case {
        CaseId::I => vec![
            Hypothesis::new(
                "tail condition: lim_eps limsup_t t P[|X|/alpha(t) > z/eps] = 0",
                K::TailCondition { sufficient_moment: 1.0 / rho },
                Checkable,
            ),
            Hypothesis::new("Y >= 0", K::YNonnegative, Checkable),
        ],
        CaseId::IIa => vec![
            moment_xt(1.0 / rho.abs()),
            // the joint product-sum lemma is stated with 1/|gamma|
            moment_xt(1.0 / gamma.abs()),
            ratio(),
            Hypothesis::new("X >= 0", K::XNonnegative, Checkable),
            Hypothesis::new("Y >= 0", K::YNonnegative, Checkable),
        ],
        CaseId::IIb => vec![Hypothesis::new(
            "tail condition: lim_eps limsup_t t P[X~/alpha~(t) > z/eps] = 0",
            K::TailCondition { sufficient_moment: 1.0 / rho.abs() },
            Checkable,
        )],
        CaseId::IIc => {
            vec![moment_xt(1.0 / rho.abs()), Hypothesis::new("Y >= 0", K::YNonnegative, Checkable)]
        }
        CaseId::IId => vec![moment_xt(1.0 / rho.abs()), ratio()],
        CaseId::III => vec![
            Hypothesis::new(
                format!("E[X^(p)] < inf for p > {}", 1.0 / gamma.abs()),
                K::MomentX { exponent: 1.0 / gamma.abs() },
                Checkable,
            ),
            Hypothesis::new("alpha(t) ~ 1/a(t)", K::AlphaSimRecipA, Declared),
            Hypothesis::new("X >= 0", K::XNonnegative, Checkable),
            Hypothesis::new("b(inf) > 0", K::EndpointPositive, Declared),
        ],
        CaseId::IV => vec![
            Hypothesis::new("0 <= X <= beta(inf)", K::XBetweenZeroAndEndpoint, Checkable),
            Hypothesis::new("Y >= 0", K::YNonnegative, Checkable),
            Hypothesis::new("beta(inf) > 0", K::EndpointPositive, Declared),
        ],
        CaseId::Unsupported(_) => Vec::new(),
    }
}
