//! Shared helpers for the Monte Carlo suites.

use statrs::distribution::{ContinuousCDF, Normal};

/// Band in standard errors that keeps the false-alarm rate of a single
/// 3-sigma comparison across `m` comparisons.
pub fn bonferroni_band(m: usize) -> f64 {
    let std = Normal::standard();
    let single = 2.0 * std.sf(3.0);
    std.inverse_cdf(1.0 - single / (2.0 * m as f64))
}

#[test]
fn band_reduces_to_three_sigma_for_one_comparison() {
    assert!((bonferroni_band(1) - 3.0).abs() < 1e-9);
    assert!(bonferroni_band(100) > 4.0);
}
