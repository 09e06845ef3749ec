use irs_secrecy::channel_gen::{gen_channels, linear_gain, distance, standard_complex_normal};
use irs_secrecy::model::{
    dbm_to_watt, effective_channels, secrecy_objective, secrecy_rate, watt_to_dbm, CVector, ChannelSet,
    SolutionState, SystemConfig, C64,
};
use irs_secrecy::onoff::{ratio_coefficients, subgradient_update, DualState, ScoreRule};
use irs_secrecy::phases::{mo_ascend, MoOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_cfg(n_tx: usize, n_refl: usize, n_irs: usize) -> SystemConfig {
    let positions = [[0.0, 20.0, 20.0], [0.0, 40.0, 20.0], [0.0, 60.0, 20.0], [0.0, 80.0, 20.0]];
    SystemConfig {
        n_tx,
        n_refl,
        n_irs,
        irs_positions: positions[..n_irs].to_vec(),
        ..SystemConfig::default()
    }
}

fn instance(seed: u64, cfg: &SystemConfig) -> (ChannelSet, SolutionState) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ch = gen_channels(cfg, &mut rng).unwrap();
    let w = CVector::from_iterator(cfg.n_tx, (0..cfg.n_tx).map(|_| standard_complex_normal(&mut rng)));
    let w = &w * C64::from(cfg.power_budget.sqrt() / w.norm());
    let m = cfg.total_elements();
    let phases = CVector::from_iterator(m, (0..m).map(|_| C64::from_polar(1.0, rng.random::<f64>() * 6.283)));
    let onoff = (0..cfg.n_irs).map(|_| rng.random_bool(0.7)).collect();
    (ch, SolutionState { beamformer: w, phases, onoff })
}

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..6, 1usize..6, 1usize..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn secrecy_rate_is_clamped_difference(seed in any::<u64>(), (nt, nr, l) in dims()) {
        let cfg = small_cfg(nt, nr, l);
        let (ch, sol) = instance(seed, &cfg);
        let rate = secrecy_rate(&ch, &sol, &cfg).unwrap();
        let obj = secrecy_objective(&ch, &sol, &cfg).unwrap();
        prop_assert!(rate >= 0.0);
        prop_assert_eq!(rate, obj.max(0.0));
    }

    #[test]
    fn common_beamformer_phase_is_irrelevant(seed in any::<u64>(), (nt, nr, l) in dims(), alpha in 0.0f64..6.3) {
        let cfg = small_cfg(nt, nr, l);
        let (ch, mut sol) = instance(seed, &cfg);
        let before = secrecy_objective(&ch, &sol, &cfg).unwrap();
        sol.beamformer *= C64::from_polar(1.0, alpha);
        let after = secrecy_objective(&ch, &sol, &cfg).unwrap();
        prop_assert!((before - after).abs() <= 1e-12 * before.abs().max(1.0));
    }

    #[test]
    fn effective_channel_is_linear_in_activation(seed in any::<u64>(), (nt, nr, l) in dims()) {
        let cfg = small_cfg(nt, nr, l);
        let (ch, sol) = instance(seed, &cfg);
        let eff = effective_channels(&ch, &sol).unwrap();
        let mut sum_user = CVector::zeros(nt);
        let mut sum_eve = CVector::zeros(nt);
        for k in (0..l).filter(|&k| sol.onoff[k]) {
            let mut single = sol.clone();
            single.onoff = (0..l).map(|j| j == k).collect();
            let part = effective_channels(&ch, &single).unwrap();
            sum_user += part.eff_user;
            sum_eve += part.eff_eve;
        }
        prop_assert!((&eff.eff_user - &sum_user).norm() <= 1e-12 * sum_user.norm().max(eff.eff_user.norm()));
        prop_assert!((&eff.eff_eve - &sum_eve).norm() <= 1e-12 * sum_eve.norm().max(eff.eff_eve.norm()));
    }

    #[test]
    fn coefficients_reconstruct_model_gains(seed in any::<u64>(), (nt, nr, l) in dims()) {
        let cfg = small_cfg(nt, nr, l);
        let (ch, mut sol) = instance(seed, &cfg);
        let coef = ratio_coefficients(&ch, &sol).unwrap();
        for mask in 0..1u32 << l {
            sol.onoff = (0..l).map(|k| mask >> k & 1 == 1).collect();
            let eff = effective_channels(&ch, &sol).unwrap();
            let user = eff.eff_user.dotc(&sol.beamformer).norm_sqr();
            let eve = eff.eff_eve.dotc(&sol.beamformer).norm_sqr();
            let scale_u = coef.c_lin.iter().sum::<f64>().max(user);
            let scale_e = coef.d_lin.iter().sum::<f64>().max(eve);
            prop_assert!((coef.user_gain(&sol.onoff) - user).abs() <= 1e-10 * scale_u);
            prop_assert!((coef.eve_gain(&sol.onoff) - eve).abs() <= 1e-10 * scale_e);
        }
    }

    #[test]
    fn multipliers_stay_nonnegative(
        seed in any::<u64>(), n in 2usize..7, iter in 1usize..1000, printed in any::<bool>()
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dual = DualState::new(n, 1.0, rng.random_range(0.01..2.0));
        for l in 0..n {
            for m in 0..l {
                dual.mult1[l][m] = rng.random_range(0.0..0.3);
                dual.mult2[l][m] = rng.random_range(0.0..0.3);
                dual.mult3[l][m] = rng.random_range(0.0..0.3);
            }
        }
        let x: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let z: Vec<Vec<bool>> = (0..n).map(|l| (0..l).map(|_| rng.random()).collect()).collect();
        let rule = if printed { ScoreRule::Printed } else { ScoreRule::Stationarity };
        let next = subgradient_update(&dual, &x, &z, iter, rule);
        for l in 0..n {
            for m in 0..l {
                prop_assert!(next.mult1[l][m] >= 0.0 && next.mult2[l][m] >= 0.0 && next.mult3[l][m] >= 0.0);
            }
        }
    }

    #[test]
    fn phase_ascent_keeps_unit_modulus_and_monotone(seed in any::<u64>(), (nt, nr, l) in dims()) {
        let cfg = small_cfg(nt, nr, l);
        let (ch, sol) = instance(seed, &cfg);
        let out = mo_ascend(&ch, &sol, &cfg, &MoOptions { max_iter: 100, ..MoOptions::default() }).unwrap();
        prop_assert!(out.phases.iter().all(|t| (t.norm() - 1.0).abs() < 1e-12));
        prop_assert!(out.trace.windows(2).all(|w| w[1] >= w[0]));
        for k in (0..l).filter(|&k| !sol.onoff[k]) {
            prop_assert_eq!(out.phases.rows(k * nr, nr).into_owned(), sol.phases.rows(k * nr, nr).into_owned());
        }
    }

    #[test]
    fn dbm_round_trip(p in -150.0f64..60.0) {
        let w = dbm_to_watt(p).unwrap();
        prop_assert!(w > 0.0);
        prop_assert!((watt_to_dbm(w) - p).abs() < 1e-9);
    }
}

#[test]
fn irs_link_power_matches_large_scale_gain() {
    let cfg = SystemConfig { n_tx: 2, n_refl: 4, ..SystemConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let draws = 4000;
    let mut user = vec![0.0; cfg.n_irs];
    let mut ap = vec![0.0; cfg.n_irs];
    for _ in 0..draws {
        let ch = gen_channels(&cfg, &mut rng).unwrap();
        for l in 0..cfg.n_irs {
            user[l] += ch.h_irs_user[l].norm_squared() / cfg.n_refl as f64;
            ap[l] += ch.g_ap_irs[l].norm_squared() / (cfg.n_refl * cfg.n_tx) as f64;
        }
    }
    for (l, irs) in cfg.irs_positions.iter().enumerate() {
        let expected_user = linear_gain(distance(irs, &cfg.user_position), &cfg).unwrap();
        let expected_ap = linear_gain(distance(&cfg.ap_position, irs), &cfg).unwrap();
        let mean_user = user[l] / draws as f64;
        let mean_ap = ap[l] / draws as f64;
        assert!((mean_user / expected_user - 1.0).abs() < 0.05, "IRS {l}: {mean_user} vs {expected_user}");
        assert!((mean_ap / expected_ap - 1.0).abs() < 0.05, "IRS {l}: {mean_ap} vs {expected_ap}");
    }
}
