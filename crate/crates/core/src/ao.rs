//! Alternating optimization over beamformer, on-off vector and phases.
//!
//! Each round runs the three blocks in that order. A block's output replaces
//! the current iterate only when the true (unclamped) secrecy objective does
//! not drop, so the per-round trace is monotone by construction.

use rand::Rng;

use crate::beamforming::{gevd_oracle, sca_solve, ScaOptions};
use crate::error::Result;
use crate::model::{
    effective_channels, mrt_beamformer, secrecy_objective, user_aligned_phases, CVector,
    ChannelSet, SolutionState, SystemConfig, C64,
};
use crate::onoff::{dinkelbach_solve, ratio_coefficients, DinkelbachOptions};
use crate::phases::{mo_ascend, MoOptions};

/// Beamforming block solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BeamformerChoice {
    #[default]
    Sca,
    Gevd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoOptions {
    pub max_rounds: usize,
    /// Stop when a round improves the objective by less than this (bits).
    pub tol: f64,
    pub beamformer: BeamformerChoice,
    pub sca: ScaOptions,
    pub onoff: DinkelbachOptions,
    pub phases: MoOptions,
}

impl Default for AoOptions {
    fn default() -> Self {
        AoOptions {
            max_rounds: 30,
            tol: 1e-5,
            beamformer: BeamformerChoice::Sca,
            sca: ScaOptions::default(),
            onoff: DinkelbachOptions::default(),
            phases: MoOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AoOutcome {
    pub solution: SolutionState,
    /// Secrecy rate `[I - I_e]^+` of the initial point and after every round.
    pub trace: Vec<f64>,
    /// Unclamped `I - I_e` at the same points.
    pub objective_trace: Vec<f64>,
    /// Rounds executed.
    pub rounds: usize,
    pub converged: bool,
}

impl AoOutcome {
    pub fn secrecy_rate(&self) -> f64 {
        *self.trace.last().expect("trace holds the initial point")
    }
}

/// Starting point: all IRSs on, MRT for unit phases, phases aligned to the
/// user through that beamformer, then MRT again for the aligned phases.
pub fn initial_state(ch: &ChannelSet, cfg: &SystemConfig) -> Result<SolutionState> {
    let mut sol = SolutionState {
        beamformer: CVector::zeros(ch.n_tx()),
        phases: CVector::from_element(ch.n_irs() * ch.n_refl(), C64::new(1.0, 0.0)),
        onoff: vec![true; ch.n_irs()],
    };
    sol.beamformer = mrt_beamformer(&effective_channels(ch, &sol)?.eff_user, cfg.power_budget);
    sol.phases = user_aligned_phases(ch, &sol.beamformer);
    sol.beamformer = mrt_beamformer(&effective_channels(ch, &sol)?.eff_user, cfg.power_budget);
    Ok(sol)
}

/// Beamforming block for fixed phases and on-off vector.
pub fn beamforming_block<R: Rng + ?Sized>(
    ch: &ChannelSet,
    sol: &SolutionState,
    cfg: &SystemConfig,
    opts: &AoOptions,
    rng: &mut R,
) -> Result<CVector> {
    let eff = effective_channels(ch, sol)?;
    Ok(match opts.beamformer {
        BeamformerChoice::Sca => sca_solve(&eff, cfg, &opts.sca, rng).beamformer,
        BeamformerChoice::Gevd => gevd_oracle(&eff, cfg).0,
    })
}

/// On-off block for fixed beamformer and phases.
pub fn onoff_block(ch: &ChannelSet, sol: &SolutionState, cfg: &SystemConfig, opts: &AoOptions) -> Result<Vec<bool>> {
    let coef = ratio_coefficients(ch, sol)?;
    Ok(dinkelbach_solve(&coef, cfg, &opts.onoff).onoff)
}

/// Phase block for fixed beamformer and on-off vector.
pub fn phase_block(ch: &ChannelSet, sol: &SolutionState, cfg: &SystemConfig, opts: &AoOptions) -> Result<CVector> {
    Ok(mo_ascend(ch, sol, cfg, &opts.phases)?.phases)
}

/// Keeps `candidate` if it does not lower the objective.
fn accept(
    ch: &ChannelSet,
    cfg: &SystemConfig,
    current: &mut SolutionState,
    value: &mut f64,
    candidate: SolutionState,
) -> Result<()> {
    let v = secrecy_objective(ch, &candidate, cfg)?;
    if v >= *value {
        *current = candidate;
        *value = v;
    }
    Ok(())
}

/// Runs the alternating optimization from [`initial_state`].
pub fn ao_solve<R: Rng + ?Sized>(
    ch: &ChannelSet,
    cfg: &SystemConfig,
    opts: &AoOptions,
    rng: &mut R,
) -> Result<AoOutcome> {
    cfg.validate()?;
    ch.validate(cfg)?;
    let mut sol = initial_state(ch, cfg)?;
    let mut value = secrecy_objective(ch, &sol, cfg)?;
    let mut objective_trace = vec![value];
    let mut rounds = 0;
    let mut converged = false;

    while rounds < opts.max_rounds {
        rounds += 1;
        let start = value;

        let w = beamforming_block(ch, &sol, cfg, opts, rng)?;
        let candidate = SolutionState { beamformer: w, ..sol.clone() };
        accept(ch, cfg, &mut sol, &mut value, candidate)?;

        let x = onoff_block(ch, &sol, cfg, opts)?;
        let candidate = SolutionState { onoff: x, ..sol.clone() };
        accept(ch, cfg, &mut sol, &mut value, candidate)?;

        let theta = phase_block(ch, &sol, cfg, opts)?;
        let candidate = SolutionState { phases: theta, ..sol.clone() };
        accept(ch, cfg, &mut sol, &mut value, candidate)?;

        objective_trace.push(value);
        if value - start < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(AoOutcome {
        solution: sol,
        trace: objective_trace.iter().map(|v| v.max(0.0)).collect(),
        objective_trace,
        rounds,
        converged,
    })
}
