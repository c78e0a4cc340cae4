//! Monte Carlo properties of the model zoo at n = 10^6.

use cevm_core::dist::BoundedDist;
use cevm_core::estimators::{self, conditional_h, scaled_exceedance, scaled_tail};
use cevm_core::transforms::reduce_model;
use cevm_core::zoo::{
    beta_min_model, case3_model, case4_model, coupled_negative_model, mrv_power_model, CevmModel,
    CoupledVariant,
};
use cevm_core::{product_prediction, Rect};

mod common;

const N: usize = 1_000_000;

fn zoo() -> Vec<CevmModel> {
    let u = || BoundedDist::uniform(1.0, 2.0);
    vec![
        beta_min_model(1.0, 1.0).unwrap(),
        beta_min_model(2.0, 1.0).unwrap(),
        mrv_power_model(1.0, 1.0, BoundedDist::point(0.5)).unwrap(),
        mrv_power_model(2.0, 1.0, BoundedDist::uniform(0.1, 0.9)).unwrap(),
        coupled_negative_model(-0.5, -1.0, CoupledVariant::IIa, u()).unwrap(),
        coupled_negative_model(-1.0, -2.0, CoupledVariant::IIb, u()).unwrap(),
        coupled_negative_model(-2.0, -2.0, CoupledVariant::IIc, u()).unwrap(),
        coupled_negative_model(-0.5, -1.0, CoupledVariant::IId, u()).unwrap(),
        case3_model(-1.0, BoundedDist::point(1.0), 1.0).unwrap(),
        case3_model(-0.5, u(), 2.0).unwrap(),
        case4_model(-1.0, 1.0, 1.0).unwrap(),
        case4_model(-0.5, 0.5, 4.0).unwrap(),
    ]
}

/// Binomial standard error of `t * p_hat` at the predicted value.
fn predicted_se(t: f64, predicted: f64, n: usize) -> f64 {
    let p = predicted / t;
    t * (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn reduction_round_trip_is_bit_exact() {
    for m in zoo() {
        let r = reduce_model(&m).unwrap();
        let back = r.inverse(&r.sample(21, 50_000));
        let direct = m.sample(21, 50_000);
        assert!(
            back.iter()
                .zip(&direct)
                .all(|(a, b)| a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits()),
            "{}",
            m.name
        );
    }
}

/// Each comparison is a 3-sigma check; across the whole family the band is
/// widened so that the suite as a whole keeps the 3-sigma false-alarm rate.
#[test]
fn marginals_match_at_empirical_quantiles() {
    let levels = [0.5, 0.2, 0.05, 0.01, 0.001];
    let models = zoo();
    let band = common::bonferroni_band(models.len() * 2 * levels.len());
    let mut worst: f64 = 0.0;
    for (i, m) in models.iter().enumerate() {
        let pairs = m.sample_reduced(100 + i as u64, N);
        for coord in 0..2 {
            let mut v: Vec<f64> =
                pairs.iter().map(|p| if coord == 0 { p.0 } else { p.1 }).collect();
            v.sort_unstable_by(|a, b| b.total_cmp(a));
            for &p in &levels {
                let q = v[(p * N as f64) as usize];
                let empirical = v.partition_point(|&s| s > q) as f64 / N as f64;
                let analytic = if coord == 0 {
                    m.reduced_survival_first(q).unwrap()
                } else {
                    m.reduced_survival_second(q).unwrap()
                };
                let se = (analytic * (1.0 - analytic) / N as f64).sqrt();
                let z = (empirical - analytic).abs() / se;
                worst = worst.max(z);
                assert!(
                    z <= band,
                    "{} coord {coord} level {p}: empirical {empirical} analytic {analytic} se {se}",
                    m.name
                );
            }
        }
    }
    eprintln!("marginals: largest deviation {worst:.2} SE, band {band:.2} SE");
}

/// Same family-wise band as the marginal check.
#[test]
fn joint_tail_grid_matches_limit_measure() {
    let grid = [0.5, 1.0, 2.0, 4.0];
    let ts = [1e3, 1e4];
    let models = zoo();
    let band = common::bonferroni_band(models.len() * ts.len() * grid.len() * grid.len());
    let mut worst: f64 = 0.0;
    for (i, m) in models.iter().enumerate() {
        let r = reduce_model(m).unwrap();
        let pairs = r.sample(200 + i as u64, N);
        for &t in &ts {
            for &x in &grid {
                for &y in &grid {
                    let est = scaled_tail(&pairs, t, (&r.first, &r.second), Rect::lower_left(x, y))
                        .unwrap();
                    let mu = m.limit_measure(x, y).unwrap();
                    let se = est.se.max(predicted_se(t, mu, N));
                    let z = (est.value - mu).abs() / se;
                    worst = worst.max(z);
                    assert!(
                        z <= band,
                        "{} t={t} x={x} y={y}: estimate {} mu {mu} se {se}",
                        m.name,
                        est.value
                    );
                }
            }
        }
    }
    eprintln!("joint tail grid: largest deviation {worst:.2} SE, band {band:.2} SE");
}

#[test]
fn conditional_limit_is_nondegenerate_and_proper() {
    let grid: Vec<f64> = (-30..=60).map(|i| 10f64.powf(i as f64 / 10.0)).collect();
    for (i, m) in zoo().iter().enumerate() {
        let r = reduce_model(m).unwrap();
        let pairs = r.sample(300 + i as u64, N);
        let h = conditional_h(&pairs, 1e3, &r.first, &r.second, 1.0, &grid).unwrap();
        let q1 = h.cdf.iter().position(|&p| p >= 0.25).expect("lower quartile on grid");
        let q3 = h.cdf.iter().position(|&p| p >= 0.75).expect("upper quartile on grid");
        assert!(grid[q3] > grid[q1], "{}: degenerate conditional law", m.name);
        let top = *h.cdf.last().unwrap();
        let se = (1.0 / h.exceedances as f64).sqrt();
        assert!(1.0 - top <= 2.0 * se, "{}: mass {} escapes to infinity", m.name, 1.0 - top);
    }
}

#[test]
fn beta_min_conditional_law() {
    // H(x) = 1 - 1/x on x >= 1 for a = 1
    let m = beta_min_model(1.0, 1.0).unwrap();
    let r = reduce_model(&m).unwrap();
    let pairs = r.sample(7, N);
    let h = conditional_h(&pairs, 1e4, &r.first, &r.second, 1.0, &[0.5, 2.0, 1e9]).unwrap();
    assert_eq!(h.cdf[0], 0.0);
    assert!((h.cdf[1] - 0.5).abs() <= 3.0 * h.se[1], "{:?}", h);
    assert_eq!(h.cdf[2], 1.0);
}

#[test]
fn reduced_second_coordinate_is_pareto_in_case_two() {
    for m in [
        beta_min_model(1.0, 1.0).unwrap(),
        coupled_negative_model(-1.0, -2.0, CoupledVariant::IIb, BoundedDist::uniform(1.0, 2.0))
            .unwrap(),
    ] {
        let r = reduce_model(&m).unwrap();
        let ys: Vec<f64> = r.sample(400, N).into_iter().map(|p| p.1).collect();
        let gamma = m.params.gamma;
        for &t in &[1e3, 1e4, 1e5] {
            for &y in &[1.0, 2.0, 4.0] {
                let est = scaled_exceedance(&ys, t, &r.second, y).unwrap();
                let limit = y.powf(1.0 / gamma);
                let se = est.se.max(predicted_se(t, limit, N));
                assert!(
                    (est.value - limit).abs() <= 3.0 * se,
                    "{} t={t} y={y}: {} vs {limit}",
                    m.name,
                    est.value
                );
            }
        }
    }
}

#[test]
fn hill_and_regression_agree_on_pivots() {
    for (i, m) in zoo().iter().enumerate() {
        let r = reduce_model(m).unwrap();
        let law = product_prediction(r.case, &m.params).unwrap();
        let pivots: Vec<f64> =
            r.sample(500 + i as u64, N).iter().map(|&(u, v)| r.pivot(u, v)).collect();
        let hill = estimators::hill(&pivots, estimators::default_k(N)).unwrap();
        let reg = estimators::index_regression(&pivots, None).unwrap();
        let (e_hill, e_reg) = (hill.exponent(), reg.exponent);
        let se_hill = e_hill / (hill.k as f64).sqrt();
        let joint = 1.96 * (se_hill.powi(2) + reg.se.powi(2)).sqrt();
        assert!(
            (e_hill - e_reg).abs() <= joint,
            "{}: hill {e_hill} regression {e_reg} joint band {joint} (predicted {})",
            m.name,
            law.tail_exponent()
        );
    }
}
