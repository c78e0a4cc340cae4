//! Experiment configs, read from JSON.
//!
//! ```json
//! {
//!   "name": "beta-min-constant",
//!   "model": { "family": "beta_min", "a": 1.0, "b": 1.0 },
//!   "n": 10000000,
//!   "seed": 7,
//!   "t_grid": [1000.0],
//!   "z_grid": [1.0],
//!   "k_policy": { "rule": "fixed", "k": 1000 },
//!   "tolerances": { "index_abs": 0.05, "constant_rel": 0.1 }
//! }
//! ```
//!
//! `y_grid` is accepted as an alias of `z_grid`.

use std::path::Path;

use cevm_core::ModelSpec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// How many order statistics Hill uses.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum KPolicy {
    /// `ceil(sqrt n)`
    #[default]
    Sqrt,
    Fixed {
        k: usize,
    },
    /// `ceil(n^exponent)`
    Power {
        exponent: f64,
    },
}

impl KPolicy {
    pub fn k(&self, n: usize) -> usize {
        match *self {
            KPolicy::Sqrt => cevm_core::estimators::default_k(n),
            KPolicy::Fixed { k } => k,
            KPolicy::Power { exponent } => (n as f64).powf(exponent).ceil() as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Allowed `|xi_hat - xi|` for the Hill estimate.
    pub index_abs: f64,
    /// When present, the Hill band is `index_rel * xi` instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_rel: Option<f64>,
    /// Allowed relative error of each scaled-tail constant.
    pub constant_rel: f64,
}

impl Tolerances {
    pub fn index_band(&self, xi: f64) -> f64 {
        match self.index_rel {
            Some(r) => r * xi.abs(),
            None => self.index_abs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub model: ModelSpec,
    pub n: usize,
    pub seed: u64,
    pub t_grid: Vec<f64>,
    #[serde(alias = "y_grid")]
    pub z_grid: Vec<f64>,
    #[serde(default)]
    pub k_policy: KPolicy,
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Parse { path: origin.to_path_buf(), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_json(&text, path)?;
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }

    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or(self.model.family())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        for (label, grid) in [("t_grid", &self.t_grid), ("z_grid", &self.z_grid)] {
            if grid.is_empty() {
                return bad(format!("{label} is empty"));
            }
            if let Some(v) = grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return bad(format!("{label} holds {v}; entries must be positive and finite"));
            }
        }
        let t_max = self.t_grid.iter().cloned().fold(0.0, f64::max);
        if (self.n as f64) < 10.0 * t_max {
            return bad(format!("n = {} is below 10 * max(t_grid) = {}", self.n, 10.0 * t_max));
        }
        let k = self.k_policy.k(self.n);
        if k == 0 || k >= self.n {
            return bad(format!("k policy gives k = {k}, need 1 <= k < n"));
        }
        let t = &self.tolerances;
        let tol_ok = |v: f64| v >= 0.0 && v.is_finite();
        if !tol_ok(t.index_abs) || !tol_ok(t.constant_rel) || !t.index_rel.is_none_or(tol_ok) {
            return bad("tolerances must be finite and nonnegative".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "model": {"family": "beta_min", "a": 1.0, "b": 1.0},
        "n": 100000, "seed": 3, "t_grid": [100.0], "y_grid": [1.0, 2.0],
        "tolerances": {"index_abs": 0.05, "constant_rel": 0.1}
    }"#;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(text, Path::new("test.json"))
    }

    #[test]
    fn parses_with_alias_and_defaults() {
        let cfg = parse(BASE).unwrap();
        assert_eq!(cfg.z_grid, vec![1.0, 2.0]);
        assert_eq!(cfg.k_policy, KPolicy::Sqrt);
        assert_eq!(cfg.k_policy.k(cfg.n), 317);
        assert_eq!(cfg.display_name(), "beta_min");
    }

    #[test]
    fn k_policies() {
        assert_eq!(KPolicy::Fixed { k: 1000 }.k(10), 1000);
        assert_eq!(KPolicy::Power { exponent: 0.5 }.k(10_000), 100);
        let json = serde_json::to_string(&KPolicy::Fixed { k: 5 }).unwrap();
        assert_eq!(json, r#"{"rule":"fixed","k":5}"#);
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            BASE.replace("100000", "999"),
            BASE.replace("[100.0]", "[]"),
            BASE.replace("[1.0, 2.0]", "[1.0, -2.0]"),
            BASE.replace("\"index_abs\": 0.05", "\"index_abs\": -1"),
        ];
        for text in &cases {
            assert!(matches!(parse(text), Err(CliError::Config(_))), "{text}");
        }
        for text in ["{", &BASE.replace("\"seed\"", "\"sed\"")] {
            let err = parse(text).unwrap_err();
            assert!(matches!(err, CliError::Parse { .. }));
            assert_eq!(err.exit_code(), 2);
        }
    }

    #[test]
    fn index_band() {
        let t = Tolerances { index_abs: 0.05, index_rel: None, constant_rel: 0.1 };
        assert_eq!(t.index_band(2.0), 0.05);
        let t = Tolerances { index_rel: Some(0.1), ..t };
        assert!((t.index_band(2.0) - 0.2).abs() < 1e-15);
    }
}
