//! Verification rows and their CSV and markdown renderings.
//!
//! CSV columns, in order:
//!
//! | column      | meaning                                                      |
//! |-------------|--------------------------------------------------------------|
//! | `config`    | config name                                                  |
//! | `model`     | model family                                                 |
//! | `case`      | product case, e.g. `II(a)`                                   |
//! | `quantity`  | what the row measures                                        |
//! | `t_or_k`    | threshold `t`, or Hill `k`                                   |
//! | `point`     | grid point `z` or `y`, or a moment order                     |
//! | `estimate`  | estimated value                                              |
//! | `se`        | standard error, or 95% half-width for Hill                   |
//! | `predicted` | theoretical value                                            |
//! | `band`      | allowed `|estimate - predicted|`                             |
//! | `verdict`   | `pass`, `fail`, `info` or `skipped: <reason>`                |
//!
//! Empty cells mean "not applicable". Numbers use the shortest decimal form
//! that round-trips, so equal runs give byte-identical files.

use std::fmt;
use std::io::Write;

use serde::{Serialize, Serializer};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported for context; never affects the overall verdict.
    Info,
    Skipped(String),
}

impl Verdict {
    pub fn from_band(estimate: f64, predicted: f64, band: f64) -> Self {
        if (estimate - predicted).abs() <= band {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::Info => f.write_str("info"),
            Verdict::Skipped(reason) => write!(f, "skipped: {reason}"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub config: String,
    pub model: String,
    pub case: String,
    pub quantity: String,
    pub t_or_k: Option<f64>,
    pub point: Option<f64>,
    pub estimate: Option<f64>,
    pub se: Option<f64>,
    pub predicted: Option<f64>,
    pub band: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub rows: Vec<Row>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.rows.iter().any(|r| r.verdict == Verdict::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.rows.extend(other.rows);
    }

    pub fn find<'a>(&'a self, quantity: &'a str) -> impl Iterator<Item = &'a Row> {
        self.rows.iter().filter(move |r| r.quantity == quantity)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        if self.rows.is_empty() {
            w.write_record([
                "config",
                "model",
                "case",
                "quantity",
                "t_or_k",
                "point",
                "estimate",
                "se",
                "predicted",
                "band",
                "verdict",
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_markdown(&self) -> String {
        let cell = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        let mut configs: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !configs.contains(&r.config.as_str()) {
                configs.push(&r.config);
            }
        }
        let mut md = String::from("# Verification report\n\n");
        let overall = if self.passed() { "PASS" } else { "FAIL" };
        md.push_str(&format!("Overall verdict: **{overall}**\n"));
        for name in configs {
            let rows: Vec<&Row> = self.rows.iter().filter(|r| r.config == name).collect();
            let failed = rows.iter().filter(|r| r.verdict == Verdict::Fail).count();
            let (model, case) = (&rows[0].model, &rows[0].case);
            md.push_str(&format!(
                "\n## {name}\n\nModel `{model}`, case {case}, {failed} failing row(s).\n\n"
            ));
            md.push_str(
                "| quantity | t or k | point | estimate | se | predicted | band | verdict |\n",
            );
            md.push_str("|---|---|---|---|---|---|---|---|\n");
            for r in rows {
                md.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    r.quantity,
                    r.t_or_k.map(|v| v.to_string()).unwrap_or_default(),
                    r.point.map(|v| v.to_string()).unwrap_or_default(),
                    cell(r.estimate),
                    cell(r.se),
                    cell(r.predicted),
                    cell(r.band),
                    r.verdict
                ));
            }
        }
        md
    }
}
