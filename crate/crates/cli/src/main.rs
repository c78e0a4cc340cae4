use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cevm_cli::config::ExperimentConfig;
use cevm_cli::error::{CliError, Result};
use cevm_cli::{experiment, samples, suite};
use cevm_core::classify::{classify, product_prediction, ModelParams};
use cevm_core::CaseId;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cevm", version, about = "Simulate and verify product laws of CEVM pairs")]
struct Cli {
    /// Worker threads for sampling and counting; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Directory for written artifacts.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Case and predicted product law for declared parameters, as JSON.
    Classify(ClassifyArgs),
    /// Draw the config's model and write the pairs.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `n` in the config.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
    },
    /// Estimate indices and constants from a sample file of the config's model.
    Estimate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: PathBuf,
    },
    /// Run one config; exit 1 when a tolerance check fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run every config in a directory and aggregate.
    Report {
        #[arg(long, default_value = "configs")]
        configs: PathBuf,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Experiment config whose model is classified.
    #[arg(long, conflicts_with_all = ["rho", "gamma"])]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "config")]
    rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "config")]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta_inf: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b_inf: Option<f64>,
    #[arg(long)]
    psi2_zero: bool,
    /// alpha~(t) / a~(t) is bounded.
    #[arg(long)]
    ratio_bounded: bool,
    /// alpha(t) ~ 1 / a(t).
    #[arg(long)]
    alpha_sim_recip_a: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Bin,
    Csv,
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn classify_cmd(args: &ClassifyArgs) -> Result<i32> {
    let params = match &args.config {
        Some(path) => experiment::build_model(&ExperimentConfig::load(path)?)?.params,
        None => {
            let mut p =
                ModelParams::new(args.rho.unwrap_or_default(), args.gamma.unwrap_or_default())
                    .with_endpoints(args.beta_inf, args.b_inf);
            p.psi2_zero = args.psi2_zero;
            p.alpha_over_a_bounded = args.ratio_bounded;
            p.alpha_sim_recip_a = args.alpha_sim_recip_a;
            p
        }
    };
    let case = classify(&params).map_err(|e| CliError::Config(e.to_string()))?;
    let out = match case {
        CaseId::Unsupported(reason) => json!({ "case": case.label(), "unsupported": reason }),
        _ => json!({ "case": case.label(), "prediction": product_prediction(case, &params)? }),
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("json value serialises"));
    Ok(0)
}

fn stem(cfg: &ExperimentConfig) -> String {
    cfg.display_name().to_string()
}

fn execute(cli: &Cli) -> Result<i32> {
    let out_dir = &cli.out_dir;
    match &cli.command {
        Command::Classify(args) => classify_cmd(args),
        Command::Simulate { config, n, format } => {
            let mut cfg = load(config, cli.seed)?;
            if let Some(n) = n {
                cfg.n = *n;
            }
            let pairs = experiment::build_model(&cfg)?.sample(cfg.seed, cfg.n);
            std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
            let path = match format {
                Format::Bin => {
                    let p = out_dir.join(format!("{}.bin", stem(&cfg)));
                    samples::save(&p, &pairs)?;
                    p
                }
                Format::Csv => {
                    let p = out_dir.join(format!("{}_samples.csv", stem(&cfg)));
                    samples::save_csv(&p, &pairs)?;
                    p
                }
            };
            println!("wrote {} pairs to {}", pairs.len(), path.display());
            Ok(0)
        }
        Command::Estimate { config, samples: file } => {
            let cfg = load(config, cli.seed)?;
            let pairs = samples::load(file)?;
            let out = experiment::estimate(&cfg, &pairs)?;
            let name = format!("{}_estimates", stem(&cfg));
            suite::write_outcome(out_dir, &name, &out.report, &out.series)?;
            print!("{}", out.report.to_csv_string()?);
            Ok(0)
        }
        Command::Verify { config } => {
            let cfg = load(config, cli.seed)?;
            let out = experiment::run(&cfg)?;
            suite::write_outcome(out_dir, &stem(&cfg), &out.report, &out.series)?;
            print!("{}", out.report.to_markdown());
            Ok(out.report.exit_code())
        }
        Command::Report { configs } => {
            let results = suite::verify_suite(configs)?;
            for (cfg, out) in &results {
                suite::write_outcome(out_dir, &stem(cfg), &out.report, &out.series)?;
            }
            let report = suite::aggregate(&results);
            suite::write_outcome(out_dir, "report", &report, &[])?;
            print!("{}", report.to_markdown());
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => {
                eprintln!("error: cannot start {w} workers: {e}");
                return ExitCode::from(3);
            }
        },
        None => execute(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
