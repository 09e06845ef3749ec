//! Monte Carlo experiments: configuration, baselines, per-trial seeding and
//! CSV output.
//!
//! Trial `i` of a run with master seed `s` draws everything from ChaCha8
//! generators keyed by `seed_i`, the first word of ChaCha8 seeded with `s` on
//! stream `i`. Separate streams of `seed_i` feed the multi-IRS channels, the
//! single-IRS channels, the random baseline and the beamformer
//! randomization, so results do not depend on which schemes are selected or
//! on how trials are scheduled across threads.

mod baselines;
mod config;
mod record;

use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use baselines::{mrt_baseline, random_baseline, single_irs_baseline};
pub use config::ExperimentConfig;
pub use record::{sort_records, summarize, write_csv, ExperimentRecord, Scheme, SummaryRow};

use crate::ao::{ao_solve, AoOptions, AoOutcome, BeamformerChoice};
use crate::channel_gen::gen_channels;
use crate::error::{Error, Result};
use crate::model::{secrecy_rate, SystemConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Secrecy rate after every AO round at the configured power.
    Convergence,
    PowerSweep,
    /// Elements per IRS at the configured power.
    ElementSweep,
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convergence" => Ok(Experiment::Convergence),
            "power_sweep" => Ok(Experiment::PowerSweep),
            "element_sweep" => Ok(Experiment::ElementSweep),
            _ => Err(Error::InvalidConfig(format!("unknown experiment '{s}'"))),
        }
    }
}

impl Experiment {
    /// Schemes run when none are requested explicitly.
    pub fn default_schemes(self) -> Vec<Scheme> {
        match self {
            Experiment::Convergence => vec![Scheme::AoMultiIrs, Scheme::SingleIrs],
            _ => Scheme::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub experiment: Experiment,
    pub trials: usize,
    pub seed: u64,
    /// Empty selects [`Experiment::default_schemes`].
    pub schemes: Vec<Scheme>,
    pub ao: AoOptions,
    /// Record wall time per row; off keeps the CSV reproducible byte for byte.
    pub record_runtime: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl RunOptions {
    pub fn new(experiment: Experiment, trials: usize, seed: u64) -> Self {
        RunOptions {
            experiment,
            trials,
            seed,
            schemes: Vec::new(),
            ao: AoOptions::default(),
            record_runtime: false,
            threads: None,
        }
    }

    pub fn with_beamformer(mut self, beamformer: BeamformerChoice) -> Self {
        self.ao.beamformer = beamformer;
        self
    }

    fn schemes(&self) -> Vec<Scheme> {
        let mut s =
            if self.schemes.is_empty() { self.experiment.default_schemes() } else { self.schemes.clone() };
        s.sort();
        s.dedup();
        s
    }
}

/// Seed of trial `trial` under master seed `master`.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial as u64);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy)]
enum Stream {
    MultiChannels = 0,
    SingleChannels = 1,
    RandomBaseline = 2,
    Beamformer = 3,
}

fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

struct SchemeResult {
    rate: f64,
    rounds: usize,
    trace: Vec<f64>,
    elapsed_ms: f64,
}

fn from_ao(out: AoOutcome, elapsed_ms: f64) -> SchemeResult {
    SchemeResult { rate: out.secrecy_rate(), rounds: out.rounds, trace: out.trace, elapsed_ms }
}

fn run_scheme(
    scheme: Scheme,
    sys: &SystemConfig,
    cfg: &ExperimentConfig,
    opts: &AoOptions,
    seed: u64,
) -> Result<SchemeResult> {
    let start = Instant::now();
    let ms = |start: Instant| start.elapsed().as_secs_f64() * 1e3;
    match scheme {
        Scheme::SingleIrs => {
            let single = sys.consolidated(cfg.single_irs_position);
            let ch = gen_channels(&single, &mut stream_rng(seed, Stream::SingleChannels))?;
            let out = single_irs_baseline(&ch, &single, opts, &mut stream_rng(seed, Stream::Beamformer))?;
            Ok(from_ao(out, ms(start)))
        }
        _ => {
            let ch = gen_channels(sys, &mut stream_rng(seed, Stream::MultiChannels))?;
            let sol = match scheme {
                Scheme::AoMultiIrs => {
                    let out = ao_solve(&ch, sys, opts, &mut stream_rng(seed, Stream::Beamformer))?;
                    return Ok(from_ao(out, ms(start)));
                }
                Scheme::Mrt => mrt_baseline(&ch, sys)?,
                _ => random_baseline(&ch, sys, &mut stream_rng(seed, Stream::RandomBaseline)),
            };
            let rate = secrecy_rate(&ch, &sol, sys)?;
            Ok(SchemeResult { rate, rounds: 0, trace: vec![rate], elapsed_ms: ms(start) })
        }
    }
}

/// Sweep points of the experiment as `(name, value, system)`.
fn sweep_points(cfg: &ExperimentConfig, experiment: Experiment) -> Result<Vec<(&'static str, f64, SystemConfig)>> {
    match experiment {
        Experiment::Convergence => Ok(vec![("round", 0.0, cfg.system()?)]),
        Experiment::PowerSweep => {
            cfg.power_grid_dbm.iter().map(|&p| Ok(("power_dbm", p, cfg.system_at(p)?))).collect()
        }
        Experiment::ElementSweep => {
            let base = cfg.system()?;
            Ok(cfg
                .element_grid
                .iter()
                .map(|&n| ("n_refl", n as f64, SystemConfig { n_refl: n, ..base.clone() }))
                .collect())
        }
    }
}

fn run_trial(cfg: &ExperimentConfig, opts: &RunOptions, schemes: &[Scheme], trial: usize) -> Result<Vec<ExperimentRecord>> {
    let seed = trial_seed(opts.seed, trial);
    let mut rows = Vec::new();
    for (name, value, sys) in sweep_points(cfg, opts.experiment)? {
        for &scheme in schemes {
            let res = run_scheme(scheme, &sys, cfg, &opts.ao, seed)?;
            let runtime_ms = if opts.record_runtime { res.elapsed_ms } else { 0.0 };
            let record = |sweep_value: f64, secrecy_rate: f64| ExperimentRecord {
                trial,
                scheme,
                sweep_name: name,
                sweep_value,
                secrecy_rate,
                rounds: res.rounds,
                runtime_ms,
                seed,
            };
            if opts.experiment == Experiment::Convergence {
                // pad with the converged value so every round has all trials
                for k in 0..=opts.ao.max_rounds {
                    let rate = res.trace.get(k).or(res.trace.last()).copied().unwrap_or(0.0);
                    rows.push(record(k as f64, rate));
                }
            } else {
                rows.push(record(value, res.rate));
            }
        }
    }
    Ok(rows)
}

/// Runs every trial and returns the rows sorted by trial, scheme and sweep
/// value.
pub fn run_trials(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    if opts.trials == 0 {
        return Err(Error::InvalidConfig("at least one trial is required".into()));
    }
    let schemes = opts.schemes();
    if opts.experiment == Experiment::Convergence {
        if let Some(s) = schemes.iter().find(|s| !s.is_iterative()) {
            return Err(Error::InvalidConfig(format!("scheme '{s}' has no iterations to trace")));
        }
    }
    let work = || -> Result<Vec<ExperimentRecord>> {
        let per_trial: Vec<Vec<ExperimentRecord>> =
            (0..opts.trials).into_par_iter().map(|t| run_trial(cfg, opts, &schemes, t)).collect::<Result<_>>()?;
        Ok(per_trial.into_iter().flatten().collect())
    };
    let mut records = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    sort_records(&mut records);
    Ok(records)
}

/// Reads the configuration, runs the experiment and writes the CSV.
pub fn run_experiment(config_path: &Path, opts: &RunOptions, out_path: &Path) -> Result<Vec<ExperimentRecord>> {
    let cfg = ExperimentConfig::from_path(config_path)?;
    let records = run_trials(&cfg, opts)?;
    let file = std::fs::File::create(out_path)?;
    write_csv(&records, std::io::BufWriter::new(file))?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n_tx: 3,
            n_refl: 3,
            power_grid_dbm: vec![10.0, 30.0],
            element_grid: vec![2, 4],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn trial_seeds_differ_and_repeat() {
        assert_eq!(trial_seed(5, 3), trial_seed(5, 3));
        assert_ne!(trial_seed(5, 3), trial_seed(5, 4));
        assert_ne!(trial_seed(5, 3), trial_seed(6, 3));
    }

    #[test]
    fn row_counts_per_experiment() {
        let cfg = small();
        let power = run_trials(&cfg, &RunOptions::new(Experiment::PowerSweep, 2, 1)).unwrap();
        assert_eq!(power.len(), 2 * 2 * 4);
        let elements = run_trials(&cfg, &RunOptions::new(Experiment::ElementSweep, 1, 1)).unwrap();
        assert_eq!(elements.len(), 2 * 4);
        let mut opts = RunOptions::new(Experiment::Convergence, 1, 1);
        opts.ao.max_rounds = 5;
        let conv = run_trials(&cfg, &opts).unwrap();
        assert_eq!(conv.len(), 2 * 6);
        assert!(conv.iter().all(|r| r.secrecy_rate >= 0.0 && r.runtime_ms == 0.0));
    }

    #[test]
    fn scheme_selection_does_not_change_results() {
        let cfg = small();
        let all = run_trials(&cfg, &RunOptions::new(Experiment::PowerSweep, 2, 9)).unwrap();
        let mut opts = RunOptions::new(Experiment::PowerSweep, 2, 9);
        opts.schemes = vec![Scheme::RandomBf, Scheme::Mrt];
        let some = run_trials(&cfg, &opts).unwrap();
        let filtered: Vec<_> = all.into_iter().filter(|r| opts.schemes.contains(&r.scheme)).collect();
        assert_eq!(filtered, some);
    }

    #[test]
    fn convergence_rejects_baselines() {
        let mut opts = RunOptions::new(Experiment::Convergence, 1, 1);
        opts.schemes = vec![Scheme::Mrt];
        assert!(run_trials(&small(), &opts).is_err());
        assert!(run_trials(&small(), &RunOptions::new(Experiment::PowerSweep, 0, 1)).is_err());
    }
}
