//! Tail estimators used to confront simulations with the product theorems.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CevmError, Result};
use crate::evt::{RvIndex, ScalingFunction};
use crate::region::Rect;

/// Hill estimate of `xi = 1 / tail exponent` with a normal 95% band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub xi_hat: f64,
    pub k: usize,
    pub n: usize,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl TailEstimate {
    pub fn exponent(&self) -> f64 {
        1.0 / self.xi_hat
    }
}

/// Hill estimator on the `k` largest of `samples`.
///
/// Computed as the mean of `ln(s_(i) / s_(k+1))`, so scaling the sample by a
/// power of two leaves the result bit-identical.
pub fn hill(samples: &[f64], k: usize) -> Result<TailEstimate> {
    let n = samples.len();
    if k == 0 || k >= n {
        return Err(CevmError::arg(format!("hill needs 1 <= k < n, got k = {k}, n = {n}")));
    }
    if samples.iter().any(|s| s.is_nan()) {
        return Err(CevmError::arg("hill: NaN in samples"));
    }
    let mut work = samples.to_vec();
    work.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let threshold = work[k];
    if !(threshold > 0.0) {
        return Err(CevmError::arg("hill needs the k + 1 largest samples to be positive"));
    }
    let mut top = work[..k].to_vec();
    // fixed summation order, independent of how the selection left the slice
    top.sort_unstable_by(|a, b| b.total_cmp(a));
    let xi_hat = top.iter().map(|s| (s / threshold).ln()).sum::<f64>() / k as f64;
    let half = 1.96 * xi_hat / (k as f64).sqrt();
    Ok(TailEstimate { xi_hat, k, n, ci_low: xi_hat - half, ci_high: xi_hat + half })
}

pub fn default_k(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

/// Hill at `k = ceil(n^0.4)`, `ceil(n^0.5)`, `ceil(n^0.6)`.
pub fn hill_sweep(samples: &[f64]) -> Result<Vec<TailEstimate>> {
    let n = samples.len();
    [0.4, 0.5, 0.6]
        .iter()
        .map(|e| {
            // the guard keeps exact powers such as 10^5^0.4 = 100 from rounding up
            let k = (((n as f64).powf(*e) - 1e-9).ceil() as usize).min(n.saturating_sub(1));
            hill(samples, k)
        })
        .collect()
}

/// Estimate of `t P[(X / s1(t), Y / s2(t)) in region]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledTailEstimate {
    pub t: f64,
    pub region: Rect,
    pub value: f64,
    pub se: f64,
    pub count: usize,
    pub n: usize,
}

/// `t * count / n` with binomial standard error; with no hits the
/// rule-of-three bound `3 t / n` is reported as the error.
fn scaled_count(t: f64, region: Rect, count: usize, n: usize) -> ScaledTailEstimate {
    let nf = n as f64;
    let p = count as f64 / nf;
    let se = if count == 0 { 3.0 * t / nf } else { t * (p * (1.0 - p) / nf).sqrt() };
    ScaledTailEstimate { t, region, value: t * p, se, count, n }
}

fn check_t(t: f64, n: usize) -> Result<()> {
    if !(t > 0.0) || (n as f64) < t {
        return Err(CevmError::arg(format!("scaled tail needs 0 < t <= n, got t = {t}, n = {n}")));
    }
    Ok(())
}

pub fn scaled_tail(
    pairs: &[(f64, f64)],
    t: f64,
    scalings: (&ScalingFunction, &ScalingFunction),
    region: Rect,
) -> Result<ScaledTailEstimate> {
    check_t(t, pairs.len())?;
    if !(region.y_lo > 0.0) {
        return Err(CevmError::arg("scaled_tail region must stay above y = 0"));
    }
    let (s1, s2) = (scalings.0.eval(t), scalings.1.eval(t));
    let count = pairs.par_iter().filter(|&&(x, y)| region.contains(x / s1, y / s2)).count();
    Ok(scaled_count(t, region, count, pairs.len()))
}

/// Estimate of `t P[V / s(t) > z]` for a single sample.
pub fn scaled_exceedance(
    samples: &[f64],
    t: f64,
    scaling: &ScalingFunction,
    z: f64,
) -> Result<ScaledTailEstimate> {
    check_t(t, samples.len())?;
    let level = scaling.eval(t) * z;
    let count = samples.par_iter().filter(|&&v| v > level).count();
    let region = Rect::upper_right(z, f64::NEG_INFINITY);
    Ok(scaled_count(t, region, count, samples.len()))
}

/// Empirical conditional distribution of the first coordinate on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDistribution {
    pub x_grid: Vec<f64>,
    pub cdf: Vec<f64>,
    pub se: Vec<f64>,
    pub exceedances: usize,
}

impl ConditionalDistribution {
    pub fn spread(&self) -> f64 {
        let max = self.cdf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.cdf.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

pub const MIN_CONDITIONAL_EXCEEDANCES: usize = 30;

/// `P[X / alpha(t) <= x | Y > y_level a(t)]` on `x_grid`.
pub fn conditional_h(
    pairs: &[(f64, f64)],
    t: f64,
    alpha: &ScalingFunction,
    y_scaling: &ScalingFunction,
    y_level: f64,
    x_grid: &[f64],
) -> Result<ConditionalDistribution> {
    if x_grid.is_empty() {
        return Err(CevmError::arg("conditional_h needs a nonempty grid"));
    }
    let (s, threshold) = (alpha.eval(t), y_scaling.eval(t) * y_level);
    let mut xs: Vec<f64> =
        pairs.par_iter().filter(|&&(_, y)| y > threshold).map(|&(x, _)| x / s).collect();
    let m = xs.len();
    if m < MIN_CONDITIONAL_EXCEEDANCES {
        return Err(CevmError::InsufficientTailData {
            found: m,
            required: MIN_CONDITIONAL_EXCEEDANCES,
        });
    }
    xs.sort_unstable_by(f64::total_cmp);
    let mf = m as f64;
    let mut cdf = Vec::with_capacity(x_grid.len());
    let mut se = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let p = xs.partition_point(|&v| v <= x) as f64 / mf;
        cdf.push(p);
        se.push((p * (1.0 - p) / mf).sqrt());
    }
    Ok(ConditionalDistribution { x_grid: x_grid.to_vec(), cdf, se, exceedances: m })
}

/// `t P[X > A(t) x, Y > a(t) y]`: vanishes under asymptotic independence
/// when `A` grows faster than the conditional scaling.
pub fn asy_indep_diag(
    pairs: &[(f64, f64)],
    t: f64,
    big_a: &ScalingFunction,
    a: &ScalingFunction,
    x: f64,
    y: f64,
) -> Result<ScaledTailEstimate> {
    scaled_tail(pairs, t, (big_a, a), Rect::upper_right(x, y))
}

/// Spread `max - min` over `x_grid` of the conditional distribution of
/// `X / A(t)` given `Y > y b(t)`. A scaling of the wrong order flattens it.
pub fn degeneracy_diag(
    pairs: &[(f64, f64)],
    t: f64,
    big_a: &ScalingFunction,
    big_b: &ScalingFunction,
    y: f64,
    x_grid: &[f64],
) -> Result<f64> {
    Ok(conditional_h(pairs, t, big_a, big_b, y, x_grid)?.spread())
}

/// Least-squares tail slope on a log-log plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexFit {
    /// Tail exponent, the negated slope of `ln survival` against `ln x`.
    pub exponent: f64,
    pub se: f64,
    pub points: Vec<(f64, f64)>,
}

impl IndexFit {
    pub fn rv_index(&self) -> RvIndex {
        RvIndex(-self.exponent)
    }
}

/// Fits `ln survival = c - exponent ln x` through `(x, survival)` points.
pub fn index_regression_fit(points: &[(f64, f64)]) -> Result<IndexFit> {
    if points.len() < 2 {
        return Err(CevmError::DegenerateSpread("fewer than two points".into()));
    }
    if points.iter().any(|&(x, s)| !(x > 0.0 && s > 0.0)) {
        return Err(CevmError::arg("index regression needs positive thresholds and survivals"));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ls: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let ms = ls.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(CevmError::DegenerateSpread("all thresholds coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ls).map(|(a, b)| (a - mx) * (b - ms)).sum();
    let slope = sxy / sxx;
    let resid: f64 = lx.iter().zip(&ls).map(|(a, b)| (b - ms - slope * (a - mx)).powi(2)).sum();
    let se = if points.len() > 2 { (resid / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(IndexFit { exponent: -slope, se, points: points.to_vec() })
}

pub const MIN_REGRESSION_SAMPLES: usize = 1000;

/// Tail exponent from the empirical survival at the upper quantiles whose
/// exceedance probabilities are `levels`.
///
/// The default levels are 10 values log-spaced over the top decade
/// `[k/(10n), k/n]` with `k = ceil(sqrt n)`. The reported error is
/// `exponent / sqrt(k_lo)` with `k_lo` the smallest exceedance count, the
/// binomial error of the sparsest point, since the points share data and
/// the least-squares residuals understate it.
pub fn index_regression(samples: &[f64], levels: Option<&[f64]>) -> Result<IndexFit> {
    let n = samples.len();
    if n < MIN_REGRESSION_SAMPLES {
        return Err(CevmError::InsufficientTailData { found: n, required: MIN_REGRESSION_SAMPLES });
    }
    let nf = n as f64;
    let default: Vec<f64>;
    let levels = match levels {
        Some(l) => l,
        None => {
            let hi = default_k(n) as f64 / nf;
            default = (0..10).map(|i| hi * 10f64.powf(-(i as f64) / 9.0)).collect();
            &default
        }
    };
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut points = Vec::with_capacity(levels.len());
    let mut k_lo = usize::MAX;
    for &p in levels {
        if !(p > 0.0 && p < 1.0) {
            return Err(CevmError::arg("regression levels must lie in (0, 1)"));
        }
        let k = ((p * nf).round() as usize).clamp(1, n - 1);
        let threshold = sorted[k];
        let count = sorted.partition_point(|&v| v > threshold);
        if count == 0 || !(threshold > 0.0) {
            continue;
        }
        k_lo = k_lo.min(count);
        points.push((threshold, count as f64 / nf));
    }
    points.dedup_by(|a, b| a.0 == b.0);
    let mut fit = index_regression_fit(&points)?;
    fit.se = fit.exponent.abs() / (k_lo as f64).sqrt();
    Ok(fit)
}
