//! One experiment: build the model, classify it, simulate, estimate, and
//! compare with the predicted product law.

use cevm_core::classify::HypothesisKind;
use cevm_core::estimators::{self, IndexFit};
use cevm_core::transforms::{pivot_scaling, pivot_value, reduce_model, ReducedPair};
use cevm_core::zoo::{moment_diagnostic, MomentVerdict};
use cevm_core::{product_prediction, CevmError, CevmModel, ProductLaw};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::report::{Row, Verdict, VerificationReport};

/// A finished run: the report plus the `(x, survival)` series behind the
/// regression index estimate.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: VerificationReport,
    pub series: Vec<(f64, f64)>,
}

/// Construction errors come from the declared parameters, so they count as
/// config errors.
pub fn build_model(cfg: &ExperimentConfig) -> Result<CevmModel> {
    CevmModel::new(cfg.display_name(), cfg.model.clone()).map_err(|e| match e {
        CevmError::InvalidParameters(_) | CevmError::UnsupportedCoupling { .. } => {
            CliError::Config(e.to_string())
        }
        other => CliError::Core(other),
    })
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    model: &'a CevmModel,
    case: String,
}

impl Context<'_> {
    fn row(&self, quantity: impl Into<String>, verdict: Verdict) -> Row {
        Row {
            config: self.cfg.display_name().to_string(),
            model: self.model.spec.family().to_string(),
            case: self.case.clone(),
            quantity: quantity.into(),
            t_or_k: None,
            point: None,
            estimate: None,
            se: None,
            predicted: None,
            band: None,
            verdict,
        }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let model = build_model(cfg)?;
    let reduced = reduce_model(&model)?;
    let pairs = reduced.sample(cfg.seed, cfg.n);
    let pivots: Vec<f64> = pairs.par_iter().map(|&(u, v)| reduced.pivot(u, v)).collect();
    evaluate(cfg, &model, &reduced, pivots, 0)
}

/// Estimates from externally supplied `(X, Y)` pairs, taken to be draws of
/// the config's model. Pairs on which the pivot is singular are dropped and
/// counted.
pub fn estimate(cfg: &ExperimentConfig, pairs: &[(f64, f64)]) -> Result<Outcome> {
    let model = build_model(cfg)?;
    let reduced = reduce_model(&model)?;
    let (beta, b) = (model.params.beta_inf.unwrap_or(0.0), model.params.b_inf.unwrap_or(0.0));
    let values: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|&(x, y)| match pivot_value(reduced.case, x, y, beta, b) {
            Ok(p) => Ok(Some(p)),
            Err(CevmError::PivotSingular { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<std::result::Result<_, _>>()?;
    let pivots: Vec<f64> = values.iter().flatten().copied().collect();
    let dropped = pairs.len() - pivots.len();
    evaluate(cfg, &model, &reduced, pivots, dropped)
}

fn evaluate(
    cfg: &ExperimentConfig,
    model: &CevmModel,
    reduced: &ReducedPair,
    pivots: Vec<f64>,
    dropped: usize,
) -> Result<Outcome> {
    let law = product_prediction(reduced.case, &model.params)?;
    let ctx = Context { cfg, model, case: reduced.case.label() };
    let mut rows = Vec::new();

    let mut r = ctx.row("predicted_rv_index", Verdict::Info);
    r.predicted = Some(law.rv_index.value());
    rows.push(r);
    for h in &law.hypotheses {
        let status = serde_json::to_value(h.status).expect("status serialises");
        let status = status.as_str().unwrap_or_default().to_string();
        rows.push(ctx.row(format!("hypothesis[{status}]: {}", h.name), Verdict::Info));
    }
    if dropped > 0 {
        let mut r = ctx.row("singular_pivots_dropped", Verdict::Info);
        r.estimate = Some(dropped as f64);
        rows.push(r);
    }

    rows.extend(index_rows(&ctx, &law, &pivots)?);
    let (regression_rows, series) = regression(&ctx, &law, &pivots);
    rows.extend(regression_rows);
    rows.extend(constant_rows(&ctx, &law, reduced, &pivots)?);
    rows.extend(moment_rows(&ctx, &law));

    Ok(Outcome { report: VerificationReport { rows }, series })
}

fn index_rows(ctx: &Context, law: &ProductLaw, pivots: &[f64]) -> Result<Vec<Row>> {
    let k = ctx.cfg.k_policy.k(pivots.len());
    let xi = law.xi();
    let band = ctx.cfg.tolerances.index_band(xi);
    let hill = estimators::hill(pivots, k)?;
    let mut rows = Vec::new();

    let mut r = ctx.row("hill_xi", Verdict::from_band(hill.xi_hat, xi, band));
    r.t_or_k = Some(k as f64);
    r.estimate = Some(hill.xi_hat);
    r.se = Some(hill.ci_high - hill.xi_hat);
    r.predicted = Some(xi);
    r.band = Some(band);
    rows.push(r);

    let mut r = ctx.row("hill_exponent", Verdict::Info);
    r.t_or_k = Some(k as f64);
    r.estimate = Some(hill.exponent());
    r.predicted = Some(law.tail_exponent());
    rows.push(r);

    for est in estimators::hill_sweep(pivots)? {
        let mut r = ctx.row("hill_xi_sweep", Verdict::Info);
        r.t_or_k = Some(est.k as f64);
        r.estimate = Some(est.xi_hat);
        r.se = Some(est.ci_high - est.xi_hat);
        r.predicted = Some(xi);
        rows.push(r);
    }
    Ok(rows)
}

fn regression(ctx: &Context, law: &ProductLaw, pivots: &[f64]) -> (Vec<Row>, Vec<(f64, f64)>) {
    match estimators::index_regression(pivots, None) {
        Ok(IndexFit { exponent, se, points }) => {
            let mut r = ctx.row("regression_exponent", Verdict::Info);
            r.estimate = Some(exponent);
            r.se = Some(se);
            r.predicted = Some(law.tail_exponent());
            (vec![r], points)
        }
        Err(e) => {
            (vec![ctx.row("regression_exponent", Verdict::Skipped(e.to_string()))], Vec::new())
        }
    }
}

fn constant_rows(
    ctx: &Context,
    law: &ProductLaw,
    reduced: &ReducedPair,
    pivots: &[f64],
) -> Result<Vec<Row>> {
    let scaling = pivot_scaling(law, reduced);
    let mut rows = Vec::new();
    for &t in &ctx.cfg.t_grid {
        for &z in &ctx.cfg.z_grid {
            let predicted = match ctx.model.product_limit(z) {
                Some(p) => p?,
                None => {
                    let gap = ctx.model.product_limit_gap().unwrap_or("no closed form");
                    let mut r = ctx.row("scaled_tail", Verdict::Skipped(gap.to_string()));
                    r.t_or_k = Some(t);
                    r.point = Some(z);
                    rows.push(r);
                    continue;
                }
            };
            let est = estimators::scaled_exceedance(pivots, t, &scaling, z)?;
            let band = ctx.cfg.tolerances.constant_rel * predicted.abs();
            let mut r = ctx.row("scaled_tail", Verdict::from_band(est.value, predicted, band));
            r.t_or_k = Some(t);
            r.point = Some(z);
            r.estimate = Some(est.value);
            r.se = Some(est.se);
            r.predicted = Some(predicted);
            r.band = Some(band);
            rows.push(r);
        }
    }
    Ok(rows)
}

/// Moment hypotheses evaluated just above their threshold order.
fn moment_rows(ctx: &Context, law: &ProductLaw) -> Vec<Row> {
    const ABOVE: f64 = 1.05;
    law.hypotheses
        .iter()
        .filter_map(|h| match h.kind {
            HypothesisKind::MomentXTilde { exponent }
            | HypothesisKind::MomentX { exponent }
            | HypothesisKind::TailCondition { sufficient_moment: exponent } => Some(exponent),
            _ => None,
        })
        .map(|e| {
            let p = ABOVE * e;
            match moment_diagnostic(ctx.model, p) {
                Ok(d) => {
                    let mut r = ctx.row(format!("moment_finite[{}]", d.variable), Verdict::Info);
                    r.point = Some(p);
                    r.estimate = d.is_finite().map(|f| if f { 1.0 } else { 0.0 });
                    if let MomentVerdict::FiniteAnalytic { value: Some(v), .. } = d.verdict {
                        r.predicted = Some(v);
                    }
                    r
                }
                Err(e) => {
                    let mut r = ctx.row("moment_finite", Verdict::Skipped(e.to_string()));
                    r.point = Some(p);
                    r
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn config(body: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(body, Path::new("t.json")).unwrap()
    }

    const BETA_MIN: &str = r#"{
        "name": "bm", "model": {"family": "beta_min", "a": 1.0, "b": 1.0},
        "n": 200000, "seed": 11, "t_grid": [100.0], "z_grid": [1.0, 2.0],
        "k_policy": {"rule": "fixed", "k": 1000},
        "tolerances": {"index_abs": 0.1, "constant_rel": 0.3}
    }"#;

    #[test]
    fn beta_min_rows() {
        let out = run(&config(BETA_MIN)).unwrap();
        let rep = &out.report;
        let tails: Vec<&Row> = rep.find("scaled_tail").collect();
        assert_eq!(tails.len(), 2);
        assert!((tails[0].predicted.unwrap() - 0.375).abs() < 1e-12);
        assert!((tails[1].predicted.unwrap() - 0.09375).abs() < 1e-12);
        let hill = rep.find("hill_xi").next().unwrap();
        assert_eq!(hill.t_or_k, Some(1000.0));
        assert_eq!(hill.predicted, Some(0.5));
        assert!(rep.passed(), "{}", rep.to_markdown());
        assert_eq!(out.series.len(), 10);
    }

    #[test]
    fn coupled_constants_are_skipped_not_dropped() {
        let cfg = config(&BETA_MIN.replace(
            r#"{"family": "beta_min", "a": 1.0, "b": 1.0}"#,
            r#"{"family": "coupled_negative", "rho": -1.0, "gamma": -2.0, "variant": "IIb",
                "u": {"kind": "uniform", "lo": 1.0, "hi": 2.0}}"#,
        ));
        let rep = run(&cfg).unwrap().report;
        let tails: Vec<&Row> = rep.find("scaled_tail").collect();
        assert_eq!(tails.len(), 2);
        assert!(tails.iter().all(|r| matches!(r.verdict, Verdict::Skipped(_))));
        assert_eq!(tails[0].case, "II(b)");
    }

    #[test]
    fn zero_index_tolerance_fails() {
        let cfg = config(&BETA_MIN.replace("\"index_abs\": 0.1", "\"index_abs\": 0.0"));
        let rep = run(&cfg).unwrap().report;
        assert_eq!(rep.exit_code(), 1);
    }

    #[test]
    fn estimate_matches_run_on_the_same_stream() {
        let cfg = config(BETA_MIN);
        let model = build_model(&cfg).unwrap();
        let pairs = model.sample(cfg.seed, cfg.n);
        let from_file = estimate(&cfg, &pairs).unwrap().report;
        let direct = run(&cfg).unwrap().report;
        let xi = |r: &VerificationReport| r.find("hill_xi").next().unwrap().estimate.unwrap();
        assert!((xi(&from_file) - xi(&direct)).abs() < 1e-6);
    }

    #[test]
    fn unsupported_coupling_is_a_config_error() {
        let cfg = config(&BETA_MIN.replace(
            r#"{"family": "beta_min", "a": 1.0, "b": 1.0}"#,
            r#"{"family": "coupled_negative", "rho": -2.0, "gamma": -1.0, "variant": "IIb",
                "u": {"kind": "point", "value": 1.0}}"#,
        ));
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }
}
