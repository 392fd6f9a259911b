//! `gram-recur`: experiment runner for Gram-matrix return-time spectra.
//!
//! One invocation runs one experiment kind (or a sweep over a grid), writes
//! CSV/JSON/SVG artifacts into the output directory, and prints a short
//! summary. Exit codes: 0 success, 1 invalid config, 2 numerical failure,
//! 3 i/o failure.

mod config;
mod error;
mod experiment;
mod report;
mod svg;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{ExperimentConfig, ExperimentKind};
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "gram-recur",
    about = "Gram-matrix spectra of quantum return times: baker map, kicked top, random vectors, Marchenko-Pastur overlays, classical return statistics",
    after_help = "KINDS:\n  baker-spectrum     Gram spectrum of a baker-map coherent-state orbit\n  top-spectrum       Gram spectrum of a kicked-top coherent-state orbit\n  random-spectrum    Gram spectrum of independent random unit vectors\n  mp-curve           Marchenko-Pastur density and CDF on a grid\n  classical-returns  Kac return times and exponential hitting-time law\n  symbol-demo        Exact Gram spectrum of a symbol sequence\n  compare            Baker vs random vs Marchenko-Pastur distances\n  sweep              Grid of runs (grid_n/grid_tau or grid_kp/grid_tau)"
)]
struct Cli {
    /// Experiment kind (see KINDS below) or 'sweep'.
    kind: String,

    /// Flat key=value config file; later --set flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one config key, e.g. --set tau=1.5 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Parallel sweep cells (defaults to the number of cores).
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,

    /// Random seed; shorthand for --set seed=U64.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let is_sweep = cli.kind == "sweep";

    let initial_kind = if is_sweep {
        ExperimentKind::BakerSpectrum
    } else {
        ExperimentKind::parse(&cli.kind)?
    };
    let mut cfg = ExperimentConfig::defaults(initial_kind);
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    for assignment in &cli.set {
        cfg.apply_kv(assignment)?;
    }
    if !is_sweep {
        // the positional kind is authoritative
        cfg.kind = initial_kind;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    if is_sweep {
        sweep::run_sweep(&cfg, &out_dir, cli.jobs)?;
        println!("sweep index: {}", out_dir.join("sweep.json").display());
        return Ok(());
    }

    cfg.validate()?;
    let output = experiment::run_experiment(&cfg, &out_dir)?;
    let report = &output.report;
    println!("kind={} seed={} rng={}", cfg.kind, report.seed, report.rng_tag);
    if let Some(summary) = &report.summary {
        println!(
            "spectrum: K={} trace={:.6} min={:.3e} zeros={} near_one_mass={:.4}",
            summary.k, summary.trace, summary.min_eig, summary.zero_count, summary.near_one_mass
        );
    }
    for (name, value) in &report.distances {
        println!("{name}={value:.6}");
    }
    if let Some(classical) = &report.classical {
        println!(
            "kac: mu={} mean_return={:.4} expected={:.1} returns={}",
            classical.kac_mu,
            classical.kac_mean_return,
            classical.kac_expected_return,
            classical.kac_completed_returns
        );
        println!(
            "hitting: mu={} mean_rescaled={:.4} ks_exp1={:.4} censored={}",
            classical.hit_mu, classical.hit_mean_rescaled, classical.hit_ks_exp1, classical.hit_censored
        );
    }
    for file in &output.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}
