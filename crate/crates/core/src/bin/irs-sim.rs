use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};

use irs_secrecy::ao::BeamformerChoice;
use irs_secrecy::harness::{run_experiment, summarize, Experiment, RunOptions, Scheme};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Beamformer {
    Sca,
    Gevd,
}

/// Monte Carlo secrecy-rate experiments for multi-IRS mmWave downlinks.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// convergence, power_sweep or element_sweep.
    #[arg(long)]
    experiment: Experiment,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Master seed.
    #[arg(long)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Beamformer::Sca)]
    beamformer: Beamformer,
    /// Comma-separated subset of ao-multi-irs, single-irs, mrt, random-bf.
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<Scheme>,
    /// Print the average secrecy rate of every sweep point.
    #[arg(long)]
    emit_summary: bool,
    /// Fill runtime_ms with wall time (the CSV is then no longer reproducible).
    #[arg(long)]
    record_runtime: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> Result<()> {
    let args = Args::parse();
    let mut opts = RunOptions::new(args.experiment, args.trials, args.seed).with_beamformer(match args.beamformer {
        Beamformer::Sca => BeamformerChoice::Sca,
        Beamformer::Gevd => BeamformerChoice::Gevd,
    });
    opts.schemes = args.scheme;
    opts.record_runtime = args.record_runtime;
    opts.threads = args.threads;

    let records = run_experiment(&args.config, &opts, &args.out)
        .with_context(|| format!("experiment with config {}", args.config.display()))?;

    if args.emit_summary {
        println!("scheme,sweep_name,sweep_value,asr,trials");
        for row in summarize(&records) {
            println!("{},{},{},{},{}", row.scheme, row.sweep_name, row.sweep_value, row.asr, row.trials);
        }
    }
    Ok(())
}
