//! Reference schemes the optimized design is compared against.

use std::f64::consts::PI;

use rand::Rng;

use crate::ao::{ao_solve, initial_state, AoOptions, AoOutcome};
use crate::channel_gen::standard_complex_normal;
use crate::error::Result;
use crate::model::{CVector, ChannelSet, SolutionState, SystemConfig, C64};

/// Every IRS on, phases aligned to the user, `w = sqrt(P) a / ||a||`.
pub fn mrt_baseline(ch: &ChannelSet, cfg: &SystemConfig) -> Result<SolutionState> {
    initial_state(ch, cfg)
}

/// Every IRS on, uniformly random phases and an isotropic random
/// full-power beamformer.
pub fn random_baseline<R: Rng + ?Sized>(ch: &ChannelSet, cfg: &SystemConfig, rng: &mut R) -> SolutionState {
    let n = ch.n_tx();
    let mut w = CVector::from_iterator(n, (0..n).map(|_| standard_complex_normal(rng)));
    let norm = w.norm();
    if norm > 0.0 {
        w *= C64::from(cfg.power_budget.sqrt() / norm);
    }
    let m = ch.n_irs() * ch.n_refl();
    let phases = CVector::from_iterator(m, (0..m).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 2.0 * PI)));
    SolutionState { beamformer: w, phases, onoff: vec![true; ch.n_irs()] }
}

/// Full alternating optimization on a consolidated single-IRS deployment.
/// `cfg` and `ch` must already describe that deployment (see
/// [`SystemConfig::consolidated`]).
pub fn single_irs_baseline<R: Rng + ?Sized>(
    ch: &ChannelSet,
    cfg: &SystemConfig,
    opts: &AoOptions,
    rng: &mut R,
) -> Result<AoOutcome> {
    ao_solve(ch, cfg, opts, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_gen::gen_channels;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn baselines_are_feasible_at_full_power() {
        let cfg = SystemConfig { n_tx: 4, n_refl: 5, ..SystemConfig::default() };
        let ch = gen_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(51)).unwrap();
        let mrt = mrt_baseline(&ch, &cfg).unwrap();
        mrt.validate(&cfg).unwrap();
        assert_close!(mrt.beamformer.norm_squared(), cfg.power_budget, 1e-12);
        let rb = random_baseline(&ch, &cfg, &mut ChaCha8Rng::seed_from_u64(52));
        rb.validate(&cfg).unwrap();
        assert_close!(rb.beamformer.norm_squared(), cfg.power_budget, 1e-12);
        assert!(rb.phases.iter().all(|t| (t.norm() - 1.0).abs() < 1e-12));
        let again = random_baseline(&ch, &cfg, &mut ChaCha8Rng::seed_from_u64(52));
        assert_eq!(rb, again);
    }

    #[test]
    fn single_irs_matches_multi_for_one_irs() {
        let cfg = SystemConfig {
            n_tx: 4,
            n_refl: 6,
            n_irs: 1,
            irs_positions: vec![[0.0, 60.0, 20.0]],
            ..SystemConfig::default()
        };
        let single = cfg.consolidated([0.0, 60.0, 20.0]);
        assert_eq!(single, cfg);
        let ch = gen_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(53)).unwrap();
        let opts = AoOptions::default();
        let a = ao_solve(&ch, &cfg, &opts, &mut ChaCha8Rng::seed_from_u64(54)).unwrap();
        let b = single_irs_baseline(&ch, &single, &opts, &mut ChaCha8Rng::seed_from_u64(54)).unwrap();
        assert_eq!(a, b);
    }
}
