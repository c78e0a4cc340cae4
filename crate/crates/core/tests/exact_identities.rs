//! Deterministic identities checked against independent oracles.

use cevm_core::limits::{case1_spectral_limit, case4_limit, example7_integral, homogeneity_check};
use cevm_core::rng;
use cevm_core::transforms::{pivot_from_reduced, pivot_value, tilde};
use cevm_core::{CaseId, Rect, SpectralMeasure};
use proptest::prelude::*;

/// Composite midpoint rule, a quadrature independent of the adaptive
/// Gauss-Kronrod one under test.
fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> f64 {
    let h = (b - a) / nodes as f64;
    (0..nodes).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

#[test]
fn example7_integral_against_midpoint_oracle() {
    for &(a, b) in &[(1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (1.5, 0.5), (3.0, 2.5)] {
        // the integrand z^{a-1} (1-z)^b is smooth on [0, 1/2] for a >= 1
        let oracle = midpoint(|z| (1.0 - z).powf(b) * z.powf(a - 1.0), 0.0, 0.5, 1_000_000);
        let q = example7_integral(a, b).unwrap().value;
        assert!((q - oracle).abs() < 1e-8, "a={a} b={b}: {q} vs {oracle}");
    }
    for &b in &[0.5, 1.0, 2.0, 3.5] {
        let closed = (1.0 - 0.5f64.powf(b + 1.0)) / (b + 1.0);
        let q = example7_integral(1.0, b).unwrap().value;
        assert!((q - closed).abs() < 1e-12, "b={b}");
    }
}

#[test]
fn pivot_identity_on_random_draws() {
    let variants = [
        (CaseId::IIa, 1.0, 1.0),
        (CaseId::IIa, 2.0, 0.5),
        (CaseId::IIb, 0.0, 0.0),
        (CaseId::IIc, 0.0, 1.0),
        (CaseId::IId, -1.0, -1.0),
    ];
    for (j, &(case, beta, b)) in variants.iter().enumerate() {
        let draws = rng::generate(j as u64, 100_000, |r| (rng::open_unit(r), rng::open_unit(r)));
        for (u1, u2) in draws {
            // a positive endpoint confines the coordinate to [0, endpoint)
            let gap =
                |e: f64, u: f64| if e > 0.0 { e * (1e-3 + 0.998 * u) } else { 1e-3 + 10.0 * u };
            let (x, y) = (beta - gap(beta, u1), b - gap(b, u2));
            let direct = pivot_value(case, x, y, beta, b).unwrap();
            let reduced =
                pivot_from_reduced(case, tilde(x, beta).unwrap(), tilde(y, b).unwrap(), beta, b);
            assert!(
                (direct - reduced).abs() <= 1e-12 * direct.abs(),
                "{case:?} at ({x}, {y}): {direct} vs {reduced}"
            );
        }
    }
}

#[test]
fn case4_limit_is_homogeneous() {
    for &(beta, gamma) in &[(1.0, 1.0), (4.0, 0.5), (2.5, 3.0)] {
        let base = case4_limit(1.0, beta, gamma).unwrap();
        for &z in &[0.5, 2.0, 7.0] {
            let v = case4_limit(z, beta, gamma).unwrap();
            let expected = z.powf(-1.0 / gamma) * base;
            assert!((v - expected).abs() <= 1e-12 * expected);
        }
    }
}

#[test]
fn limit_measure_homogeneity_for_standard_mrv() {
    // nu of (R W, R (1 - W)) with W = 1/4 or 3/4 equally likely
    let nu = |r: &Rect| {
        let mut total = 0.0;
        for &w in &[0.25, 0.75] {
            let lo = (r.x_lo / w).max(r.y_lo / (1.0 - w)).max(0.0);
            let hi = (r.x_hi / w).min(r.y_hi / (1.0 - w));
            if hi > lo {
                total += 0.5 * (1.0 / lo - if hi.is_finite() { 1.0 / hi } else { 0.0 });
            }
        }
        total
    };
    let rect = Rect::new(0.5, 3.0, 0.25, 1.5);
    for &c in &[0.5, 2.0, 10.0] {
        let scale = nu(&rect) / c;
        assert!(homogeneity_check(nu, c, &rect, 1e-12 * scale));
    }
}

proptest! {
    #[test]
    fn case1_limit_homogeneous(z in 0.01f64..100.0, c in 0.1f64..10.0, rho in 0.1f64..3.0,
                               gamma in 0.1f64..3.0, w in 0.0f64..0.99) {
        let s = SpectralMeasure::unit_atom(w).unwrap();
        let v = case1_spectral_limit(z, &s, rho, gamma).unwrap().value;
        let vc = case1_spectral_limit(c * z, &s, rho, gamma).unwrap().value;
        let expected = c.powf(-1.0 / (rho + gamma)) * v;
        prop_assert!((vc - expected).abs() <= 1e-12 * expected.abs().max(f64::MIN_POSITIVE));
    }
}
