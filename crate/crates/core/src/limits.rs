//! Explicit limit constants for the scaled tail of the product.
//!
//! * Case I, through the spectral measure `S` of the standardised pair:
//!   `lim t P[XY / (alpha(t) a(t)) > z]
//!      = z^{-1/(rho+gamma)} int w^{rho/(rho+gamma)} (1-w)^{gamma/(rho+gamma)} S(dw)`.
//! * Case IV: `lim t P[XY / a(t) > z] = z^{-1/gamma} beta(inf)^{1/gamma}`.
//! * The Beta/minimum family: `lim t P[(1-XY)^{-1} / a~(t) > y]
//!      = a y^{-(a+b)} int_0^{1/2} (1-z)^b z^{a-1} dz`.

use serde::{Deserialize, Serialize};

use crate::error::{CevmError, Result};
use crate::quadrature::{self, Quadrature};
use crate::region::Rect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub omega: f64,
    pub weight: f64,
}

/// Discrete measure on the angles `w = x/(x+y)` in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralMeasure {
    atoms: Vec<Atom>,
}

impl SpectralMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(0.0..1.0).contains(&a.omega) {
                return Err(CevmError::arg(format!("spectral atom at {} outside [0, 1)", a.omega)));
            }
            if !(a.weight >= 0.0 && a.weight.is_finite()) {
                return Err(CevmError::arg("spectral weights must be finite and nonnegative"));
            }
        }
        Ok(Self { atoms })
    }

    pub fn unit_atom(omega: f64) -> Result<Self> {
        Self::new(vec![Atom { omega, weight: 1.0 }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|a| a.weight * f(a.omega)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitValue {
    pub value: f64,
    /// The measure is empty, so the limit is trivially zero.
    pub degenerate: bool,
}

pub fn case1_spectral_limit(
    z: f64,
    spectral: &SpectralMeasure,
    rho: f64,
    gamma: f64,
) -> Result<LimitValue> {
    if !(z > 0.0 && rho > 0.0 && gamma > 0.0) {
        return Err(CevmError::arg("case1_spectral_limit needs z, rho, gamma > 0"));
    }
    if spectral.is_empty() {
        return Ok(LimitValue { value: 0.0, degenerate: true });
    }
    let s = rho + gamma;
    let (p, q) = (rho / s, gamma / s);
    let integral = spectral.integrate(|w| w.powf(p) * (1.0 - w).powf(q));
    Ok(LimitValue { value: z.powf(-1.0 / s) * integral, degenerate: false })
}

pub fn case4_limit(z: f64, beta_inf: f64, gamma: f64) -> Result<f64> {
    if !(z > 0.0 && beta_inf > 0.0 && gamma > 0.0) {
        return Err(CevmError::arg("case4_limit needs z, beta_inf, gamma > 0"));
    }
    Ok(z.powf(-1.0 / gamma) * beta_inf.powf(1.0 / gamma))
}

/// `int_0^{1/2} (1-z)^b z^{a-1} dz`.
///
/// The substitution `z = u^{1/a}` turns this into
/// `(1/a) int_0^{2^{-a}} (1 - u^{1/a})^b du`, which has no endpoint
/// singularity for any `a > 0`.
pub fn example7_integral(a: f64, b: f64) -> Result<Quadrature> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(CevmError::arg("example7 integral needs a, b > 0"));
    }
    let upper = 0.5f64.powf(a);
    let inv_a = 1.0 / a;
    let q = quadrature::integrate(|u| (1.0 - u.powf(inv_a)).powf(b), 0.0, upper, 1e-10 * a)?;
    Ok(Quadrature { value: q.value / a, abs_error: q.abs_error / a, evaluations: q.evaluations })
}

pub fn example7_limit(y: f64, a: f64, b: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(CevmError::arg("example7_limit needs y > 0"));
    }
    let q = example7_integral(a, b)?;
    Ok(a * y.powf(-(a + b)) * q.value)
}

/// Histogram estimate of the spectral measure from nonnegative pairs.
///
/// Points with `r = x + y > r_threshold` are binned by `w = x / r`. A bin
/// holding `m` of the `n` points gets weight `r_threshold * m / n * t_scale`,
/// so that for standard multivariate regular variation the total estimates
/// `S([0, 1))` through `nu{x + y > r} = S / r`. Atoms sit at bin centres; empty
/// bins are dropped.
pub fn spectral_from_samples(
    pairs: &[(f64, f64)],
    r_threshold: f64,
    bins: usize,
    t_scale: f64,
) -> Result<SpectralMeasure> {
    const MIN_EXCEEDANCES: usize = 50;
    if !(r_threshold > 0.0) || bins == 0 || !(t_scale > 0.0) {
        return Err(CevmError::arg("spectral_from_samples needs positive threshold, bins, scale"));
    }
    let mut counts = vec![0usize; bins];
    let mut found = 0usize;
    for &(x, y) in pairs {
        if x < 0.0 || y < 0.0 {
            return Err(CevmError::arg("spectral_from_samples needs nonnegative pairs"));
        }
        let r = x + y;
        if r > r_threshold {
            let w = x / r;
            let idx = ((w * bins as f64) as usize).min(bins - 1);
            counts[idx] += 1;
            found += 1;
        }
    }
    if found < MIN_EXCEEDANCES {
        return Err(CevmError::InsufficientTailData { found, required: MIN_EXCEEDANCES });
    }
    let n = pairs.len() as f64;
    let atoms = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| Atom {
            omega: (i as f64 + 0.5) / bins as f64,
            weight: r_threshold * c as f64 / n * t_scale,
        })
        .collect();
    SpectralMeasure::new(atoms)
}

/// `|nu(c rect) - nu(rect) / c| <= tol`.
pub fn homogeneity_check<F: Fn(&Rect) -> f64>(nu: F, c: f64, rect: &Rect, tol: f64) -> bool {
    (nu(&rect.scaled(c)) - nu(rect) / c).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Limit measure of `R (1/2, 1/2)` with `P[R > r] = 1/r`: the image of
    /// `r^{-2} dr` on the diagonal.
    fn diagonal_nu(rect: &Rect) -> f64 {
        let lo = 2.0 * rect.x_lo.max(rect.y_lo).max(0.0);
        let hi = 2.0 * rect.x_hi.min(rect.y_hi);
        if hi <= lo {
            0.0
        } else {
            1.0 / lo - if hi.is_finite() { 1.0 / hi } else { 0.0 }
        }
    }

    #[test]
    fn case1_examples() {
        let s = SpectralMeasure::unit_atom(0.5).unwrap();
        assert!((case1_spectral_limit(1.0, &s, 1.0, 1.0).unwrap().value - 0.5).abs() < 1e-15);
        assert!((case1_spectral_limit(4.0, &s, 1.0, 1.0).unwrap().value - 0.25).abs() < 1e-15);
        let s0 = SpectralMeasure::unit_atom(0.0).unwrap();
        assert_eq!(case1_spectral_limit(1.0, &s0, 2.0, 0.5).unwrap().value, 0.0);
        let empty = SpectralMeasure::default();
        let v = case1_spectral_limit(1.0, &empty, 1.0, 1.0).unwrap();
        assert!(v.degenerate && v.value == 0.0);
    }

    #[test]
    fn case4_examples() {
        assert_eq!(case4_limit(1.0, 1.0, 1.0).unwrap(), 1.0);
        assert!((case4_limit(4.0, 1.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((case4_limit(1.0, 4.0, 0.5).unwrap() - 16.0).abs() < 1e-12);
        assert!(case4_limit(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn example7_examples() {
        assert!((example7_limit(1.0, 1.0, 1.0).unwrap() - 0.375).abs() < 1e-12);
        assert!((example7_limit(2.0, 1.0, 1.0).unwrap() - 0.09375).abs() < 1e-12);
        for &(a, b) in &[(0.5, 1.5), (2.0, 1.0), (3.0, 0.7)] {
            let r = example7_limit(2.6, a, b).unwrap() / example7_limit(1.3, a, b).unwrap();
            assert!((r - 2f64.powf(-(a + b))).abs() < 1e-13);
        }
    }

    #[test]
    fn spectral_measure_rejects_bad_atoms() {
        assert!(SpectralMeasure::unit_atom(1.0).is_err());
        assert!(SpectralMeasure::new(vec![Atom { omega: 0.2, weight: -1.0 }]).is_err());
        let json = serde_json::to_string(&SpectralMeasure::unit_atom(0.5).unwrap()).unwrap();
        assert_eq!(json, r#"[{"omega":0.5,"weight":1.0}]"#);
    }

    #[test]
    fn spectral_symmetric_rays() {
        // deterministic radii r_i = n / (i + 1/2): exactly Pareto quantiles
        let n = 20_000;
        let mut pairs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let r = n as f64 / (i as f64 + 0.5);
            pairs.push((0.25 * r, 0.75 * r));
            pairs.push((0.75 * r, 0.25 * r));
        }
        let s = spectral_from_samples(&pairs, 100.0, 3, 1.0).unwrap();
        assert_eq!(s.atoms().len(), 2);
        assert_eq!(s.atoms()[0].weight, s.atoms()[1].weight);
    }

    #[test]
    fn spectral_needs_exceedances() {
        let pairs = vec![(0.1, 0.1); 1000];
        assert!(matches!(
            spectral_from_samples(&pairs, 10.0, 10, 1.0),
            Err(CevmError::InsufficientTailData { found: 0, .. })
        ));
    }

    #[test]
    fn homogeneity_examples() {
        let rect = Rect::new(1.0, 3.0, 0.5, 2.0);
        assert!(homogeneity_check(diagonal_nu, 2.0, &rect, 1e-9));
        assert!(homogeneity_check(diagonal_nu, 1.0, &rect, 0.0));
        assert!(!homogeneity_check(|r| diagonal_nu(r) + 0.1, 2.0, &rect, 1e-3));
    }
}
