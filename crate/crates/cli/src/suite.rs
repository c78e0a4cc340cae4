//! Running a directory of configs and writing artifacts.

use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::experiment::{self, Outcome};
use crate::report::VerificationReport;

/// The `*.json` files of `dir`, sorted by file name.
pub fn config_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if paths.is_empty() {
        return Err(CliError::EmptySuite(dir.to_path_buf()));
    }
    Ok(paths)
}

/// Runs every config in `dir` in file-name order, each with its own seed.
///
/// All configs are parsed before any runs, so a malformed file fails fast.
/// Configs run one after another; each run already spreads its sampling
/// over the worker pool.
pub fn verify_suite(dir: &Path) -> Result<Vec<(ExperimentConfig, Outcome)>> {
    let configs =
        config_paths(dir)?.iter().map(|p| ExperimentConfig::load(p)).collect::<Result<Vec<_>>>()?;
    configs
        .into_iter()
        .map(|cfg| {
            let out = experiment::run(&cfg)?;
            Ok((cfg, out))
        })
        .collect()
}

pub fn aggregate(results: &[(ExperimentConfig, Outcome)]) -> VerificationReport {
    let mut report = VerificationReport::default();
    for (_, out) in results {
        report.extend(out.report.clone());
    }
    report
}

fn write(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Writes `<stem>.csv`, `<stem>.md` and, when present, the regression series
/// `<stem>_series.csv` into `dir`.
pub fn write_outcome(
    dir: &Path,
    stem: &str,
    report: &VerificationReport,
    series: &[(f64, f64)],
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write(&dir.join(format!("{stem}.csv")), report.to_csv_string()?.as_bytes())?;
    write(&dir.join(format!("{stem}.md")), report.to_markdown().as_bytes())?;
    if !series.is_empty() {
        let path = dir.join(format!("{stem}_series.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["x", "survival"])?;
        for p in series {
            w.serialize(p)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
