//! Univariate extreme value primitives.
//!
//! `G_gamma(x) = exp(-(1 + gamma x)^(-1/gamma))` on `{1 + gamma x > 0}`,
//! `exp(-exp(-x))` for `gamma = 0`. A survival function `F̄` lies in the
//! domain of attraction of `G_gamma` when there are scalings `a(t) > 0` and
//! centerings `b(t)` with
//!
//! ```text
//! t F̄(a(t) y + b(t)) -> (1 + gamma y)^(-1/gamma)
//! ```
//!
//! [`doa_scalings`] builds such a pair from the quantile function
//! `b(t) = (1/F̄)^{<-}(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{CevmError, Result};

/// GEV shape parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevShape {
    pub gamma: f64,
}

impl GevShape {
    pub fn new(gamma: f64) -> Self {
        Self { gamma }
    }

    /// Lower and upper ends of `{x : 1 + gamma x > 0}`.
    pub fn support(&self) -> (f64, f64) {
        let g = self.gamma;
        if g > 0.0 {
            (-1.0 / g, f64::INFINITY)
        } else if g < 0.0 {
            (f64::NEG_INFINITY, -1.0 / g)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }
}

/// Exponent of regular variation. Negative values are tail decay indices.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RvIndex(pub f64);

impl RvIndex {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn gev_cdf(x: f64, shape: GevShape) -> Result<f64> {
    if x.is_nan() || shape.gamma.is_nan() {
        return Err(CevmError::arg("gev_cdf: NaN input"));
    }
    let g = shape.gamma;
    if g == 0.0 {
        return Ok((-(-x).exp()).exp());
    }
    let base = 1.0 + g * x;
    if base <= 0.0 {
        // below the lower end for g > 0, above the upper end for g < 0
        return Ok(if g > 0.0 { 0.0 } else { 1.0 });
    }
    Ok((-base.powf(-1.0 / g)).exp())
}

/// `inf { s in [lo, hi] : f(s) >= level }` for nondecreasing `f`.
///
/// Bisection runs until the bracket collapses to adjacent floats, so the
/// returned point `s*` satisfies `f(s*) >= level` and every `s` with
/// `f(s) >= level` has `s >= s*`. An infinite `hi` is handled by doubling the
/// bracket.
pub fn left_inverse<F>(f: F, domain: (f64, f64), level: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, hi_dom) = domain;
    if level.is_nan() || lo.is_nan() || hi_dom.is_nan() || !lo.is_finite() || hi_dom < lo {
        return Err(CevmError::arg("left_inverse: invalid domain or level"));
    }
    if f(lo) >= level {
        return Ok(lo);
    }
    let mut hi = if hi_dom.is_finite() {
        if f(hi_dom) < level {
            return Err(CevmError::InverseUndefined { level });
        }
        hi_dom
    } else {
        let mut step = lo.abs().max(1.0);
        loop {
            let probe = lo + step;
            if !probe.is_finite() {
                return Err(CevmError::InverseUndefined { level });
            }
            if f(probe) >= level {
                break probe;
            }
            lo = probe;
            step *= 2.0;
        }
    };
    loop {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            return Ok(hi);
        }
        if f(mid) >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Piecewise-linear nondecreasing function on knots, constant outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl MonotoneGrid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(CevmError::arg("grid needs at least two knots of equal length"));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(CevmError::arg("grid knots must be finite"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CevmError::arg("grid abscissae must be strictly increasing"));
        }
        if ys.windows(2).any(|w| w[1] < w[0]) {
            return Err(CevmError::NonMonotone("grid values decrease".into()));
        }
        Ok(Self { xs, ys })
    }

    pub fn eval(&self, x: f64) -> f64 {
        interpolate(&self.xs, &self.ys, x)
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = xs.partition_point(|&k| k <= x) - 1;
    let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + w * (ys[i + 1] - ys[i])
}

/// A survival function `P[Y > y]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Survival {
    /// `(y / scale)^(-alpha)` for `y >= scale`.
    Pareto { alpha: f64, scale: f64 },
    /// `((endpoint - y) / width)^exponent` on `[endpoint - width, endpoint]`.
    /// Uniform, Beta(1, a) and `(1 - y)^k` laws are all of this form.
    BoundedPower { endpoint: f64, width: f64, exponent: f64 },
    /// Knots `(xs[i], survival[i])`, linearly interpolated. Survival must be
    /// strictly decreasing; it equals `survival[0]` to the left of the grid
    /// and 0 to the right.
    Tabulated { xs: Vec<f64>, survival: Vec<f64> },
}

impl Survival {
    pub fn pareto(alpha: f64) -> Self {
        Survival::Pareto { alpha, scale: 1.0 }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        Survival::BoundedPower { endpoint: hi, width: hi - lo, exponent: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Survival::Pareto { alpha, scale } => {
                if !(*alpha > 0.0 && *scale > 0.0 && alpha.is_finite() && scale.is_finite()) {
                    return Err(CevmError::arg("Pareto survival needs alpha, scale > 0"));
                }
            }
            Survival::BoundedPower { endpoint, width, exponent } => {
                if !(endpoint.is_finite() && *width > 0.0 && *exponent > 0.0) {
                    return Err(CevmError::arg("bounded power survival needs width, exponent > 0"));
                }
            }
            Survival::Tabulated { xs, survival } => {
                if xs.len() < 2 || xs.len() != survival.len() {
                    return Err(CevmError::arg("tabulated survival needs matching knots"));
                }
                if xs.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(CevmError::arg("tabulated abscissae must increase"));
                }
                if survival.windows(2).any(|w| w[1] >= w[0]) {
                    return Err(CevmError::NonMonotone(
                        "tabulated survival must be strictly decreasing".into(),
                    ));
                }
                if survival.iter().any(|s| !(0.0..=1.0).contains(s)) {
                    return Err(CevmError::arg("survival values must lie in [0, 1]"));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            Survival::Pareto { alpha, scale } => {
                if y <= *scale {
                    1.0
                } else {
                    (y / scale).powf(-alpha)
                }
            }
            Survival::BoundedPower { endpoint, width, exponent } => {
                if y >= *endpoint {
                    0.0
                } else if y <= endpoint - width {
                    1.0
                } else {
                    ((endpoint - y) / width).powf(*exponent)
                }
            }
            Survival::Tabulated { xs, survival } => {
                if y > xs[xs.len() - 1] {
                    0.0
                } else {
                    interpolate(xs, survival, y)
                }
            }
        }
    }

    /// Lower and upper ends of the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Survival::Pareto { scale, .. } => (*scale, f64::INFINITY),
            Survival::BoundedPower { endpoint, width, .. } => (endpoint - width, *endpoint),
            Survival::Tabulated { xs, .. } => (xs[0], xs[xs.len() - 1]),
        }
    }

    pub fn upper_endpoint(&self) -> Option<f64> {
        let hi = self.support().1;
        hi.is_finite().then_some(hi)
    }

    /// `b(t) = (1/F̄)^{<-}(t)`, the quantile at level `1 - 1/t`.
    ///
    /// Closed-form families go through [`left_inverse`]; tabulated survivals
    /// invert the linear interpolation knot by knot.
    pub fn quantile_level(&self, t: f64) -> f64 {
        match self {
            Survival::Tabulated { xs, survival } => {
                let p = 1.0 / t;
                // survival is strictly decreasing, so (survival, xs) reversed
                // is an increasing table of the inverse.
                if p >= survival[0] {
                    return xs[0];
                }
                let n = xs.len();
                if p <= survival[n - 1] {
                    return xs[n - 1];
                }
                let i = survival.partition_point(|&s| s > p);
                let (s0, s1) = (survival[i - 1], survival[i]);
                let w = (s0 - p) / (s0 - s1);
                xs[i - 1] + w * (xs[i] - xs[i - 1])
            }
            _ => {
                left_inverse(|s| 1.0 / self.eval(s), self.support(), t).unwrap_or(self.support().1)
            }
        }
    }
}

/// How a [`ScalingFunction`] is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalingForm {
    /// `coeff * t^exponent`
    Power {
        coeff: f64,
        exponent: f64,
    },
    /// `limit - coeff * t^exponent`
    LimitMinusPower {
        limit: f64,
        coeff: f64,
        exponent: f64,
    },
    Tabulated {
        grid: MonotoneGrid,
    },
    /// Quantile `(1/F̄)^{<-}(t)` of a survival function.
    Quantile {
        survival: Survival,
    },
    Scaled {
        factor: f64,
        inner: Box<ScalingFunction>,
    },
    /// `inner.limit_at_infinity - inner(t)`
    GapToLimit {
        inner: Box<ScalingFunction>,
    },
    Reciprocal {
        inner: Box<ScalingFunction>,
    },
    Product {
        left: Box<ScalingFunction>,
        right: Box<ScalingFunction>,
    },
}

/// A scaling or centering function of `t >= 1`, tagged with its index of
/// regular variation and, for centerings that converge, the limit at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFunction {
    pub form: ScalingForm,
    pub kappa: f64,
    pub limit_at_infinity: Option<f64>,
}

impl ScalingFunction {
    pub fn power(coeff: f64, exponent: f64) -> Self {
        let limit = if exponent < 0.0 { Some(0.0) } else { None };
        Self {
            form: ScalingForm::Power { coeff, exponent },
            kappa: exponent,
            limit_at_infinity: limit,
        }
    }

    pub fn constant(value: f64) -> Self {
        Self {
            form: ScalingForm::Power { coeff: value, exponent: 0.0 },
            kappa: 0.0,
            limit_at_infinity: Some(value),
        }
    }

    /// `limit - coeff t^exponent` with `exponent < 0`, e.g. a centering
    /// `beta(t)` converging to the endpoint `beta(inf)`.
    pub fn limit_minus_power(limit: f64, coeff: f64, exponent: f64) -> Self {
        Self {
            form: ScalingForm::LimitMinusPower { limit, coeff, exponent },
            kappa: 0.0,
            limit_at_infinity: Some(limit),
        }
    }

    pub fn tabulated(grid: MonotoneGrid, kappa: f64) -> Self {
        Self { form: ScalingForm::Tabulated { grid }, kappa, limit_at_infinity: None }
    }

    pub fn scaled(factor: f64, inner: ScalingFunction) -> Self {
        let kappa = inner.kappa;
        let limit = inner.limit_at_infinity.map(|l| factor * l);
        Self {
            form: ScalingForm::Scaled { factor, inner: Box::new(inner) },
            kappa,
            limit_at_infinity: limit,
        }
    }

    pub fn reciprocal(inner: ScalingFunction) -> Self {
        let kappa = -inner.kappa;
        let limit = match inner.limit_at_infinity {
            Some(l) if l != 0.0 => Some(1.0 / l),
            _ => None,
        };
        Self {
            form: ScalingForm::Reciprocal { inner: Box::new(inner) },
            kappa,
            limit_at_infinity: limit,
        }
    }

    pub fn product(left: ScalingFunction, right: ScalingFunction) -> Self {
        let kappa = left.kappa + right.kappa;
        Self {
            form: ScalingForm::Product { left: Box::new(left), right: Box::new(right) },
            kappa,
            limit_at_infinity: None,
        }
    }

    /// `limit(inner) - inner(t)`, regularly varying with index `gap_kappa`.
    pub fn gap_to_limit(inner: ScalingFunction, gap_kappa: f64) -> Result<Self> {
        if inner.limit_at_infinity.is_none() {
            return Err(CevmError::MissingEndpoint("gap_to_limit needs a finite limit"));
        }
        Ok(Self {
            form: ScalingForm::GapToLimit { inner: Box::new(inner) },
            kappa: gap_kappa,
            limit_at_infinity: Some(0.0),
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.form {
            ScalingForm::Power { coeff, exponent } => coeff * t.powf(*exponent),
            ScalingForm::LimitMinusPower { limit, coeff, exponent } => {
                limit - coeff * t.powf(*exponent)
            }
            ScalingForm::Tabulated { grid } => grid.eval(t),
            ScalingForm::Quantile { survival } => survival.quantile_level(t),
            ScalingForm::Scaled { factor, inner } => factor * inner.eval(t),
            ScalingForm::GapToLimit { inner } => {
                // limit presence is checked at construction
                inner.limit_at_infinity.unwrap_or(f64::NAN) - inner.eval(t)
            }
            ScalingForm::Reciprocal { inner } => 1.0 / inner.eval(t),
            ScalingForm::Product { left, right } => left.eval(t) * right.eval(t),
        }
    }
}

/// Scaling `a` and centering `b` placing `survival` in `D(G_gamma)`.
///
/// `b(t)` is the level `1 - 1/t` quantile. For `gamma > 0`, `a(t) = gamma
/// b(t)`; for `gamma < 0`, `a(t) = |gamma| (b(inf) - b(t))` where `b(inf)` is
/// the finite upper endpoint.
pub fn doa_scalings(
    survival: &Survival,
    shape: GevShape,
) -> Result<(ScalingFunction, ScalingFunction)> {
    survival.validate()?;
    let gamma = shape.gamma;
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(CevmError::arg("doa_scalings requires a finite nonzero gamma"));
    }
    let endpoint = survival.upper_endpoint();
    if gamma < 0.0 && endpoint.is_none() {
        return Err(CevmError::MissingEndpoint("gamma < 0 needs a finite upper endpoint"));
    }
    let b = ScalingFunction {
        form: ScalingForm::Quantile { survival: survival.clone() },
        kappa: if gamma > 0.0 { gamma } else { 0.0 },
        limit_at_infinity: if gamma < 0.0 { endpoint } else { None },
    };
    let a = if gamma > 0.0 {
        ScalingFunction::scaled(gamma, b.clone())
    } else {
        ScalingFunction::scaled(gamma.abs(), ScalingFunction::gap_to_limit(b.clone(), gamma)?)
    };
    Ok((a, b))
}

/// Limits `psi1(x) = lim alpha(tx)/alpha(t)` and
/// `psi2(x) = lim (beta(tx) - beta(t))/alpha(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiPair {
    pub rho: f64,
    pub k: f64,
    pub psi2_zero: bool,
}

pub fn psi_eval(p: PsiPair, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(CevmError::arg("psi_eval needs x > 0"));
    }
    let psi1 = x.powf(p.rho);
    let psi2 = if p.psi2_zero {
        0.0
    } else if p.rho == 0.0 {
        p.k * x.ln()
    } else {
        p.k / p.rho * (x.powf(p.rho) - 1.0)
    };
    Ok((psi1, psi2))
}
