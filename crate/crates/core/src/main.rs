use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fastshock::flux::{check_entropy, check_k_convexity, classify};
use fastshock::harness::run::run_experiment;
use fastshock::harness::suite::{run_suite, SuiteOptions};
use fastshock::harness::{load_config, output, ExperimentConfig};
use fastshock::profile::{build_profile_with, verify_decay, DecayWindows};
use fastshock::{Exec, Result};

#[derive(Parser)]
#[command(
    name = "fastshock",
    version,
    about = "Viscous shocks with fast diffusion"
)]
struct Cli {
    /// Directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reserved; runs are deterministic.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shock speed, type, tail rates and convexity of a config's flux.
    Classify { config: PathBuf },
    /// Build the traveling wave and check its tails.
    Profile { config: PathBuf },
    /// Full run with diagnostics and verdicts.
    Simulate { config: PathBuf },
    /// Reference examples over their parameter grids.
    Suite {
        /// Example ids (default: all four).
        ids: Vec<u8>,
        /// Override the per-example m values.
        #[arg(long, num_args = 1..)]
        m: Vec<f64>,
    },
}

fn load(path: &Path, out: &Option<PathBuf>) -> Result<ExperimentConfig> {
    let mut config = load_config(path)?;
    if out.is_some() {
        config.out_dir = out.clone();
    }
    Ok(config)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    let _ = cli.seedless;
    match cli.command {
        Command::Classify { config } => {
            let config = load(&config, &cli.out)?;
            let model = &config.model;
            let c = classify(model)?;
            let entropy = check_entropy(model, c.speed, 2000, Exec::Auto);
            let convexity =
                (!c.is_degenerate()).then(|| check_k_convexity(model, c.speed, 2000, Exec::Auto));
            let ok = entropy.holds && convexity.as_ref().is_none_or(|r| r.holds);
            print_json(&serde_json::json!({
                "classification": c,
                "entropy": entropy,
                "convexity": convexity,
            }))?;
            Ok(ok)
        }
        Command::Profile { config } => {
            let config = load(&config, &cli.out)?;
            let c = classify(&config.model)?;
            let profile = build_profile_with(&config.model, c, &config.profile_options())?;
            let decay = verify_decay(&profile, DecayWindows::default_for(&profile))?;
            if let Some(dir) = &config.out_dir {
                std::fs::create_dir_all(dir)?;
                output::write_profile_csv(&dir.join("profile.csv"), &profile)?;
            }
            let tol = fastshock::harness::THRESHOLDS.decay_rel_err;
            print_json(&decay)?;
            Ok(decay.rel_err_q <= tol && decay.rel_err_lambda <= tol)
        }
        Command::Simulate { config } => {
            let config = load(&config, &cli.out)?;
            let report = run_experiment(&config)?;
            for v in &report.verdicts {
                println!("{:<16} {:?}: {}", v.criterion, v.status, v.detail);
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            Ok(report.passed())
        }
        Command::Suite { ids, m } => {
            let ids = if ids.is_empty() {
                vec![1, 2, 3, 4]
            } else {
                ids
            };
            let options = SuiteOptions {
                out_dir: cli.out.clone(),
                ..SuiteOptions::default()
            };
            let m_grid = (!m.is_empty()).then_some(m.as_slice());
            let report = run_suite(&ids, m_grid, &options)?;
            for e in &report.entries {
                match (&e.report, &e.error) {
                    (Some(r), _) => {
                        let failed: Vec<&str> = r
                            .verdicts
                            .iter()
                            .filter(|v| !v.is_ok())
                            .map(|v| v.criterion.as_str())
                            .collect();
                        let status = if failed.is_empty() {
                            "ok".to_string()
                        } else {
                            format!("failed: {}", failed.join(", "))
                        };
                        println!("example {} m = {}: {status}", e.example, e.m);
                    }
                    (None, Some(err)) => {
                        println!("example {} m = {}: error: {err}", e.example, e.m)
                    }
                    (None, None) => {}
                }
            }
            for v in &report.cross_checks {
                println!("{:<16} {:?}: {}", v.criterion, v.status, v.detail);
            }
            Ok(report.passed())
        }
    }
}
