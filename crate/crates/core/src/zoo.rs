//! Samplable conditional extreme value models, one family per case.
//!
//! Every family is built from inverse-transform draws of Pareto variables
//! and bounded mixing factors, with slowly varying parts identically one, so
//! that marginals, limit measures and product constants have closed forms
//! or one-dimensional integrals. Draws are produced in the reduced
//! coordinates of the model's case and mapped back through
//! [`Reduction::inverse`]; the original sample stream is therefore exactly
//! the inverse image of the reduced one.
//!
//! | family             | case        | reduced draw                                       |
//! |--------------------|-------------|----------------------------------------------------|
//! | `beta_min`         | II(a)       | `X~ = U1^{-1/a}`, `Y~ = min(X~, U2^{-1/b})`        |
//! | `mrv_power`        | I           | `(X, Y) = ((R W)^rho, (R (1-W))^gamma)`            |
//! | `coupled_negative` | II(a)-(d)   | `Y~ = U1^gamma`, `X~ = Y~^{rho/gamma} U`           |
//! | `case3`            | III         | `Y~ = U1^gamma`, `X = Y~ V`                        |
//! | `case4`            | IV          | `Y = U1^{-gamma}`, `beta - X = Y^{rho/gamma} beta U2` |

use std::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, CaseId, ModelParams};
use crate::dist::BoundedDist;
use crate::error::{CevmError, Result};
use crate::estimators;
use crate::evt::ScalingFunction;
use crate::limits::{self, Atom, SpectralMeasure};
use crate::quadrature;
use crate::rng::{self, open_unit};
use crate::transforms::Reduction;

/// Number of equal-mass atoms standing in for a continuous angle law.
const SPECTRAL_BINS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoupledVariant {
    IIa,
    IIb,
    IIc,
    IId,
}

impl CoupledVariant {
    /// `(beta(inf), b(inf))`.
    pub fn endpoints(self) -> (f64, f64) {
        match self {
            CoupledVariant::IIa => (1.0, 1.0),
            CoupledVariant::IIb => (0.0, 0.0),
            CoupledVariant::IIc => (0.0, 1.0),
            CoupledVariant::IId => (-1.0, -1.0),
        }
    }
}

impl fmt::Display for CoupledVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Family and family parameters; everything else about a model is derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    BetaMin { a: f64, b: f64 },
    MrvPower { rho: f64, gamma: f64, w: BoundedDist },
    CoupledNegative { rho: f64, gamma: f64, variant: CoupledVariant, u: BoundedDist },
    Case3 { gamma: f64, v: BoundedDist, b_inf: f64 },
    Case4 { rho: f64, gamma: f64, beta_inf: f64 },
}

impl ModelSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::BetaMin { .. } => "beta_min",
            ModelSpec::MrvPower { .. } => "mrv_power",
            ModelSpec::CoupledNegative { .. } => "coupled_negative",
            ModelSpec::Case3 { .. } => "case3",
            ModelSpec::Case4 { .. } => "case4",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CevmModel {
    pub name: String,
    pub spec: ModelSpec,
    pub params: ModelParams,
    /// Scaling and centering of `X`.
    pub alpha: ScalingFunction,
    pub beta: ScalingFunction,
    /// Scaling and centering of `Y`.
    pub a: ScalingFunction,
    pub b: ScalingFunction,
    reduction: Reduction,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CevmError::InvalidParameters(format!("{name} must be positive and finite, got {v}")))
    }
}

fn positive_factor(name: &str, d: &BoundedDist) -> Result<()> {
    d.validate()?;
    let (lo, _) = d.support();
    if lo > 0.0 {
        Ok(())
    } else {
        Err(CevmError::InvalidParameters(format!("{name} must be supported in (0, inf)")))
    }
}

pub fn beta_min_model(a: f64, b: f64) -> Result<CevmModel> {
    CevmModel::new(format!("beta_min(a={a},b={b})"), ModelSpec::BetaMin { a, b })
}

pub fn mrv_power_model(rho: f64, gamma: f64, w: BoundedDist) -> Result<CevmModel> {
    CevmModel::new(
        format!("mrv_power(rho={rho},gamma={gamma})"),
        ModelSpec::MrvPower { rho, gamma, w },
    )
}

pub fn coupled_negative_model(
    rho: f64,
    gamma: f64,
    variant: CoupledVariant,
    u: BoundedDist,
) -> Result<CevmModel> {
    CevmModel::new(
        format!("coupled_{variant}(rho={rho},gamma={gamma})"),
        ModelSpec::CoupledNegative { rho, gamma, variant, u },
    )
}

pub fn case3_model(gamma: f64, v: BoundedDist, b_inf: f64) -> Result<CevmModel> {
    CevmModel::new(
        format!("case3(gamma={gamma},b_inf={b_inf})"),
        ModelSpec::Case3 { gamma, v, b_inf },
    )
}

pub fn case4_model(rho: f64, gamma: f64, beta_inf: f64) -> Result<CevmModel> {
    CevmModel::new(
        format!("case4(rho={rho},gamma={gamma},beta_inf={beta_inf})"),
        ModelSpec::Case4 { rho, gamma, beta_inf },
    )
}

impl CevmModel {
    pub fn new(name: impl Into<String>, spec: ModelSpec) -> Result<Self> {
        let zero = || ScalingFunction::constant(0.0);
        let (params, alpha, beta, a, b) = match &spec {
            &ModelSpec::BetaMin { a, b } => {
                positive("a", a)?;
                positive("b", b)?;
                let idx = -1.0 / (a + b);
                let mut p = ModelParams::new(idx, idx).with_endpoints(Some(1.0), Some(1.0));
                p.psi2_zero = true;
                p.alpha_over_a_bounded = true;
                let s = ScalingFunction::power(1.0, idx);
                (p, s.clone(), ScalingFunction::constant(1.0), s, ScalingFunction::constant(1.0))
            }
            ModelSpec::MrvPower { rho, gamma, w } => {
                positive("rho", *rho)?;
                positive("gamma", *gamma)?;
                w.validate()?;
                let (lo, hi) = w.support();
                if lo < 0.0 || hi >= 1.0 {
                    return Err(CevmError::InvalidParameters(
                        "w must be supported in [0, 1)".into(),
                    ));
                }
                let p = ModelParams::new(*rho, *gamma);
                (
                    p,
                    ScalingFunction::power(1.0, *rho),
                    zero(),
                    ScalingFunction::power(1.0, *gamma),
                    zero(),
                )
            }
            ModelSpec::CoupledNegative { rho, gamma, variant, u } => {
                positive("-rho", -rho)?;
                positive("-gamma", -gamma)?;
                if rho.abs() > gamma.abs() {
                    return Err(CevmError::UnsupportedCoupling {
                        rho_abs: rho.abs(),
                        gamma_abs: gamma.abs(),
                    });
                }
                positive_factor("u", u)?;
                let (be, bb) = variant.endpoints();
                let mut p = ModelParams::new(*rho, *gamma).with_endpoints(Some(be), Some(bb));
                p.psi2_zero = true;
                p.alpha_over_a_bounded = true;
                (
                    p,
                    ScalingFunction::power(1.0, *rho),
                    ScalingFunction::constant(be),
                    ScalingFunction::power(1.0, *gamma),
                    ScalingFunction::constant(bb),
                )
            }
            ModelSpec::Case3 { gamma, v, b_inf } => {
                positive("-gamma", -gamma)?;
                positive("b_inf", *b_inf)?;
                positive_factor("v", v)?;
                let mut p =
                    ModelParams::new(gamma.abs(), *gamma).with_endpoints(None, Some(*b_inf));
                p.alpha_sim_recip_a = true;
                (
                    p,
                    ScalingFunction::power(1.0, gamma.abs()),
                    zero(),
                    ScalingFunction::power(1.0, *gamma),
                    ScalingFunction::constant(*b_inf),
                )
            }
            &ModelSpec::Case4 { rho, gamma, beta_inf } => {
                positive("-rho", -rho)?;
                positive("gamma", gamma)?;
                positive("beta_inf", beta_inf)?;
                let p = ModelParams::new(rho, gamma).with_endpoints(Some(beta_inf), None);
                (
                    p,
                    ScalingFunction::power(1.0, rho),
                    ScalingFunction::constant(beta_inf),
                    ScalingFunction::power(1.0, gamma),
                    zero(),
                )
            }
        };
        let case = classify(&params)?;
        let reduction = Reduction::for_case(case, params.beta_inf, params.b_inf)?;
        Ok(Self { name: name.into(), spec, params, alpha, beta, a, b, reduction })
    }

    pub fn case(&self) -> Result<CaseId> {
        classify(&self.params)
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction
    }

    #[inline]
    fn draw_reduced<R: RngCore>(&self, rng: &mut R) -> (f64, f64) {
        let u1 = open_unit(rng);
        let u2 = open_unit(rng);
        match &self.spec {
            ModelSpec::BetaMin { a, b } => {
                let xt = u1.powf(-1.0 / a);
                let zt = u2.powf(-1.0 / b);
                (xt, xt.min(zt))
            }
            ModelSpec::MrvPower { rho, gamma, w } => {
                let r = 1.0 / u1;
                let w = w.sample(u2);
                ((r * w).powf(*rho), (r * (1.0 - w)).powf(*gamma))
            }
            ModelSpec::CoupledNegative { rho, gamma, u, .. } => {
                let yt = u1.powf(*gamma);
                (yt.powf(rho / gamma) * u.sample(u2), yt)
            }
            ModelSpec::Case3 { gamma, v, .. } => {
                let yt = u1.powf(*gamma);
                (yt * v.sample(u2), yt)
            }
            ModelSpec::Case4 { rho, gamma, beta_inf } => {
                let y = u1.powf(-gamma);
                (y.powf(rho / gamma) * beta_inf * u2, y)
            }
        }
    }

    /// Reduced coordinates of the first `n` draws of stream `seed`.
    pub fn sample_reduced(&self, seed: u64, n: usize) -> Vec<(f64, f64)> {
        rng::generate(seed, n, |r| self.draw_reduced(r))
    }

    /// The first `n` pairs `(X, Y)` of stream `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<(f64, f64)> {
        let red = self.reduction;
        rng::generate(seed, n, |r| {
            let (u, v) = self.draw_reduced(r);
            red.inverse(u, v)
        })
    }

    /// `P[first reduced coordinate > u]`.
    pub fn reduced_survival_first(&self, u: f64) -> Result<f64> {
        match &self.spec {
            ModelSpec::BetaMin { a, .. } => Ok(pareto_survival(u, *a)),
            ModelSpec::MrvPower { rho, w, .. } => {
                if u <= 0.0 {
                    return Ok(1.0);
                }
                let s = u.powf(1.0 / rho);
                w.expect_with_breaks(|w| (w / s).min(1.0), &[s])
            }
            ModelSpec::CoupledNegative { rho, u: f, .. } => {
                scaled_pareto_survival(f, u, 1.0 / rho.abs())
            }
            ModelSpec::Case3 { gamma, v, .. } => scaled_pareto_survival(v, u, 1.0 / gamma.abs()),
            ModelSpec::Case4 { rho, beta_inf, .. } => {
                let r = u / beta_inf;
                if r <= 0.0 {
                    return Ok(1.0);
                }
                if r >= 1.0 {
                    return Ok(0.0);
                }
                // D = Q beta U2 with P[Q <= q] = q^lambda on (0, 1]
                let lambda = 1.0 / rho.abs();
                let tail = if (lambda - 1.0).abs() < 1e-12 {
                    -r * r.ln()
                } else {
                    r * lambda / (lambda - 1.0) * (1.0 - r.powf(lambda - 1.0))
                };
                Ok(1.0 - r.powf(lambda) - tail)
            }
        }
    }

    /// `P[second reduced coordinate > v]`.
    pub fn reduced_survival_second(&self, v: f64) -> Result<f64> {
        match &self.spec {
            ModelSpec::BetaMin { a, b } => Ok(pareto_survival(v, a + b)),
            ModelSpec::MrvPower { gamma, w, .. } => {
                if v <= 0.0 {
                    return Ok(1.0);
                }
                let s = v.powf(1.0 / gamma);
                w.expect_with_breaks(|w| ((1.0 - w) / s).min(1.0), &[1.0 - s])
            }
            ModelSpec::CoupledNegative { gamma, .. } | ModelSpec::Case3 { gamma, .. } => {
                Ok(pareto_survival(v, 1.0 / gamma.abs()))
            }
            ModelSpec::Case4 { gamma, .. } => Ok(pareto_survival(v, 1.0 / gamma)),
        }
    }

    /// Limit measure `mu([0, x] x (y, inf])` of the reduced pair divided by
    /// its scalings.
    pub fn limit_measure(&self, x: f64, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(CevmError::arg("limit_measure needs y > 0"));
        }
        if x <= 0.0 {
            return Ok(0.0);
        }
        const TOL: f64 = 1e-11;
        match &self.spec {
            ModelSpec::BetaMin { a, b } => {
                Ok(if x > y { (y.powf(-a) - x.powf(-a)) * y.powf(-b) } else { 0.0 })
            }
            ModelSpec::MrvPower { rho, gamma, w } => {
                let (xs, ys) = (x.powf(1.0 / rho), y.powf(1.0 / gamma));
                // (1-w)/ys - w/xs changes sign at w = xs / (xs + ys)
                let kink = xs / (xs + ys);
                w.expect_with_breaks(|w| ((1.0 - w) / ys - w / xs).max(0.0), &[kink])
            }
            ModelSpec::CoupledNegative { rho, gamma, u, .. } => {
                power_mixture_measure(u, x, y.powf(1.0 / gamma), rho.abs(), TOL)
            }
            ModelSpec::Case3 { gamma, v, .. } => {
                power_mixture_measure(v, x, y.powf(1.0 / gamma), gamma.abs(), TOL)
            }
            ModelSpec::Case4 { rho, gamma, beta_inf } => {
                let f = BoundedDist::uniform(0.0, *beta_inf);
                power_mixture_measure(&f, x, y.powf(-1.0 / gamma), *rho, TOL)
            }
        }
    }

    /// Spectral measure of the standardised pair `(X^{1/rho}, Y^{1/gamma})`
    /// in Case I.
    pub fn spectral_measure(&self) -> Option<SpectralMeasure> {
        match &self.spec {
            ModelSpec::MrvPower { w, .. } => {
                let atoms = w
                    .atoms(SPECTRAL_BINS)
                    .into_iter()
                    .map(|(omega, weight)| Atom { omega, weight })
                    .collect();
                SpectralMeasure::new(atoms).ok()
            }
            _ => None,
        }
    }

    /// `lim t P[pivot / scaling(t) > z]` where the family has a closed form.
    pub fn product_limit(&self, z: f64) -> Option<Result<f64>> {
        match &self.spec {
            ModelSpec::BetaMin { a, b } => Some(limits::example7_limit(z, *a, *b)),
            ModelSpec::MrvPower { rho, gamma, .. } => {
                let s = self.spectral_measure()?;
                Some(limits::case1_spectral_limit(z, &s, *rho, *gamma).map(|v| v.value))
            }
            ModelSpec::Case4 { gamma, beta_inf, .. } => {
                Some(limits::case4_limit(z, *beta_inf, *gamma))
            }
            ModelSpec::CoupledNegative { .. } | ModelSpec::Case3 { .. } => None,
        }
    }

    /// Why [`product_limit`](Self::product_limit) is `None`.
    pub fn product_limit_gap(&self) -> Option<&'static str> {
        match self.spec {
            ModelSpec::CoupledNegative { .. } => Some("no closed-form constant for coupled models"),
            ModelSpec::Case3 { .. } => Some("no closed-form constant in case III"),
            _ => None,
        }
    }
}

fn pareto_survival(u: f64, index: f64) -> f64 {
    if u <= 1.0 {
        1.0
    } else {
        u.powf(-index)
    }
}

/// `P[P F > u]` for `P` Pareto with `P[P > s] = s^{-index}` on `[1, inf)`
/// and `F` an independent positive factor.
fn scaled_pareto_survival(f: &BoundedDist, u: f64, index: f64) -> Result<f64> {
    if u <= 0.0 {
        return Ok(1.0);
    }
    f.expect_with_breaks(|v| (v / u).powf(index).min(1.0), &[u])
}

/// `int_0^q_max F(x q^power) dq` with `F` the cdf of `f`.
fn power_mixture_measure(f: &BoundedDist, x: f64, q_max: f64, power: f64, tol: f64) -> Result<f64> {
    let breaks: Vec<f64> = f
        .breakpoints()
        .into_iter()
        .filter(|&v| v > 0.0)
        .map(|v| (v / x).powf(1.0 / power))
        .collect();
    let q = quadrature::integrate_pieces(|q| f.cdf(x * q.powf(power)), 0.0, q_max, &breaks, tol)?;
    Ok(q.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MomentVerdict {
    FiniteAnalytic {
        value: Option<f64>,
        justification: String,
    },
    InfiniteAnalytic {
        justification: String,
    },
    /// Log-log slope of the empirical survival with its 95% interval.
    Empirical {
        slope: f64,
        ci_low: f64,
        ci_high: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentDiagnosis {
    pub exponent: f64,
    /// The variable whose moment is examined.
    pub variable: String,
    #[serde(flatten)]
    pub verdict: MomentVerdict,
}

impl MomentDiagnosis {
    /// `Some(finite)` when the verdict decides finiteness.
    pub fn is_finite(&self) -> Option<bool> {
        match &self.verdict {
            MomentVerdict::FiniteAnalytic { .. } => Some(true),
            MomentVerdict::InfiniteAnalytic { .. } => Some(false),
            MomentVerdict::Empirical { ci_low, ci_high, .. } => {
                if self.exponent < -ci_low {
                    Some(true)
                } else if self.exponent > -ci_high {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }
}

/// `E[V^p]` finite or not for the first reduced coordinate `V` of the model.
pub fn moment_diagnostic(model: &CevmModel, p: f64) -> Result<MomentDiagnosis> {
    positive("p", p)?;
    let diag = |variable: &str, verdict| MomentDiagnosis {
        exponent: p,
        variable: variable.to_string(),
        verdict,
    };
    let pareto = |variable: &str, index: f64, factor: f64, why: &str| {
        if p < index {
            diag(
                variable,
                MomentVerdict::FiniteAnalytic {
                    value: Some(index / (index - p) * factor),
                    justification: why.to_string(),
                },
            )
        } else {
            diag(variable, MomentVerdict::InfiniteAnalytic { justification: why.to_string() })
        }
    };
    Ok(match &model.spec {
        ModelSpec::BetaMin { a, .. } => {
            pareto("X~", *a, 1.0, "X~ is Pareto with index a: E[X~^p] = a/(a-p) for p < a")
        }
        ModelSpec::CoupledNegative { rho, gamma, u, .. } => {
            // X~^p = Y~^{cp} U^p with Y~ Pareto of index 1/|gamma|
            let c = rho.abs() / gamma.abs();
            let ip = 1.0 / gamma.abs();
            if c * p < ip {
                diag(
                    "X~",
                    MomentVerdict::FiniteAnalytic {
                        value: Some(ip / (ip - c * p) * u.moment(p)),
                        justification:
                            "X~ = Y~^{|rho|/|gamma|} U with bounded U: finite iff p < 1/|rho|"
                                .into(),
                    },
                )
            } else {
                diag(
                    "X~",
                    MomentVerdict::InfiniteAnalytic {
                        justification: "X~ has a Pareto tail of index 1/|rho|".into(),
                    },
                )
            }
        }
        ModelSpec::Case3 { gamma, v, .. } => pareto(
            "X",
            1.0 / gamma.abs(),
            v.moment(p),
            "X = Y~ V with Y~ Pareto of index 1/|gamma| and bounded V",
        ),
        ModelSpec::MrvPower { rho, w, .. } => {
            // E[(RW)^{rho p}] = E[R^{rho p}] E[W^{rho p}]
            let q = rho * p;
            if q < 1.0 {
                diag(
                    "X",
                    MomentVerdict::FiniteAnalytic {
                        value: Some(w.moment(q) / (1.0 - q)),
                        justification: "X = (R W)^rho with R standard Pareto: finite iff rho p < 1"
                            .into(),
                    },
                )
            } else {
                diag(
                    "X",
                    MomentVerdict::InfiniteAnalytic {
                        justification: "R^{rho p} has no mean for rho p >= 1".into(),
                    },
                )
            }
        }
        ModelSpec::Case4 { rho, beta_inf, .. } => {
            let lambda = 1.0 / rho.abs();
            diag(
                "beta(inf) - X",
                MomentVerdict::FiniteAnalytic {
                    value: Some(lambda / (lambda + p) * beta_inf.powf(p) / (p + 1.0)),
                    justification: "beta(inf) - X is bounded by beta(inf)".into(),
                },
            )
        }
    })
}

/// Moment diagnosis from samples: `E[V^p]` is judged finite when `p` lies
/// below the estimated tail exponent of `|V|`.
pub fn moment_diagnostic_empirical(samples: &[f64], p: f64) -> Result<MomentDiagnosis> {
    positive("p", p)?;
    let abs: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    let fit = estimators::index_regression(&abs, None)?;
    let slope = -fit.exponent;
    Ok(MomentDiagnosis {
        exponent: p,
        variable: "sample".into(),
        verdict: MomentVerdict::Empirical {
            slope,
            ci_low: slope - 1.96 * fit.se,
            ci_high: slope + 1.96 * fit.se,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zoo() -> Vec<CevmModel> {
        vec![
            beta_min_model(1.0, 1.0).unwrap(),
            mrv_power_model(1.0, 1.0, BoundedDist::point(0.5)).unwrap(),
            coupled_negative_model(-0.5, -1.0, CoupledVariant::IIa, BoundedDist::uniform(1.0, 2.0))
                .unwrap(),
            coupled_negative_model(-1.0, -2.0, CoupledVariant::IIb, BoundedDist::uniform(1.0, 2.0))
                .unwrap(),
            coupled_negative_model(-2.0, -2.0, CoupledVariant::IIc, BoundedDist::uniform(1.0, 2.0))
                .unwrap(),
            coupled_negative_model(-0.5, -1.0, CoupledVariant::IId, BoundedDist::uniform(1.0, 2.0))
                .unwrap(),
            case3_model(-1.0, BoundedDist::point(1.0), 1.0).unwrap(),
            case4_model(-1.0, 1.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn cases_match_families() {
        let cases: Vec<CaseId> = zoo().iter().map(|m| m.case().unwrap()).collect();
        use CaseId::*;
        assert_eq!(cases, vec![IIa, I, IIa, IIb, IIc, IId, III, IV]);
    }

    #[test]
    fn sample_is_inverse_image_of_reduced_sample() {
        for m in zoo() {
            let red = m.sample_reduced(5, 1000);
            let orig = m.sample(5, 1000);
            for (&(u, v), &(x, y)) in red.iter().zip(&orig) {
                let (ix, iy) = m.reduction().inverse(u, v);
                assert_eq!((ix.to_bits(), iy.to_bits()), (x.to_bits(), y.to_bits()));
            }
        }
    }

    #[test]
    fn samples_respect_endpoints() {
        for m in zoo() {
            for (x, y) in m.sample(9, 20_000) {
                if let Some(e) = m.params.beta_inf {
                    assert!(x <= e, "{}: x = {x}", m.name);
                }
                if let Some(e) = m.params.b_inf {
                    assert!(y <= e, "{}: y = {y}", m.name);
                }
            }
        }
        for (x, _) in case4_model(-1.0, 1.0, 1.0).unwrap().sample(2, 20_000) {
            assert!((0.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn beta_min_marginals() {
        let m = beta_min_model(1.0, 1.0).unwrap();
        // P[Y > 1/2] = P[Y~ > 2]
        assert!((m.reduced_survival_second(2.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((m.reduced_survival_second(3.0).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert!((m.reduced_survival_first(4.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn coupled_rejects_strong_x_index() {
        let err = coupled_negative_model(-2.0, -1.0, CoupledVariant::IIa, BoundedDist::point(1.0));
        assert!(matches!(err, Err(CevmError::UnsupportedCoupling { .. })));
    }

    #[test]
    fn case4_first_marginal_closed_form() {
        // oracle: P[Q beta U > d] by midpoint quadrature over Q's density
        for &(rho, d) in &[(-1.0, 0.3), (-0.5, 0.1), (-2.0, 0.7)] {
            let m = case4_model(rho, 1.0, 1.0).unwrap();
            let lambda = 1.0 / f64::abs(rho);
            let n = 200_000;
            let h = 1.0 / n as f64;
            let oracle: f64 = (0..n)
                .map(|i| {
                    let q = (i as f64 + 0.5) * h;
                    lambda * q.powf(lambda - 1.0) * (1.0 - d / q).max(0.0) * h
                })
                .sum();
            let got = m.reduced_survival_first(d).unwrap();
            assert!((got - oracle).abs() < 1e-6, "rho {rho}: {got} vs {oracle}");
        }
    }

    #[test]
    fn mrv_point_mass_product_limit() {
        let m = mrv_power_model(1.0, 1.0, BoundedDist::point(0.5)).unwrap();
        assert!((m.product_limit(1.0).unwrap().unwrap() - 0.5).abs() < 1e-15);
        // W = 1/2 and rho = gamma makes the coordinates equal
        assert!(m.sample(1, 100).iter().all(|(x, y)| x == y));
    }

    #[test]
    fn beta_min_measure_matches_family_formula() {
        let m = beta_min_model(1.0, 1.0).unwrap();
        assert!((m.limit_measure(2.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(m.limit_measure(0.5, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn mrv_measure_on_diagonal() {
        // W = 1/2: mu([0,x] x (y,inf]) = (1/(2y) - 1/(2x))^+
        let m = mrv_power_model(1.0, 1.0, BoundedDist::point(0.5)).unwrap();
        assert!((m.limit_measure(4.0, 1.0).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(m.limit_measure(1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn coupled_measure_with_point_factor() {
        // U = 1, rho = gamma = -1: X~ = Y~, mu = (1/y - 1/x)^+
        let m = coupled_negative_model(-1.0, -1.0, CoupledVariant::IIa, BoundedDist::point(1.0))
            .unwrap();
        let v = m.limit_measure(4.0, 1.0).unwrap();
        assert!((v - 0.75).abs() < 1e-9, "{v}");
    }

    #[test]
    fn moment_examples() {
        let m = beta_min_model(1.0, 1.0).unwrap();
        assert_eq!(moment_diagnostic(&m, 2.0).unwrap().is_finite(), Some(false));
        let d = moment_diagnostic(&m, 0.5).unwrap();
        match d.verdict {
            MomentVerdict::FiniteAnalytic { value, .. } => {
                assert!((value.unwrap() - 2.0).abs() < 1e-15)
            }
            other => panic!("{other:?}"),
        }
        let c3 = case3_model(-1.0, BoundedDist::point(1.0), 1.0).unwrap();
        assert_eq!(moment_diagnostic(&c3, 0.5).unwrap().is_finite(), Some(true));
        let c2 = coupled_negative_model(-0.5, -1.0, CoupledVariant::IIa, BoundedDist::point(1.0))
            .unwrap();
        // X~ tail index is 1/|rho| = 2
        assert_eq!(moment_diagnostic(&c2, 2.0).unwrap().is_finite(), Some(false));
        assert_eq!(moment_diagnostic(&c2, 1.5).unwrap().is_finite(), Some(true));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ModelSpec::CoupledNegative {
            rho: -1.0,
            gamma: -2.0,
            variant: CoupledVariant::IIb,
            u: BoundedDist::uniform(1.0, 2.0),
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains(r#""family":"coupled_negative""#) && json.contains(r#""IIb""#));
        assert_eq!(serde_json::from_str::<ModelSpec>(&json).unwrap(), spec);
    }
}
