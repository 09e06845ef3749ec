//! Geometric mmWave channel synthesis.
//!
//! Every link is a sparse sum of propagation paths over half-wavelength
//! uniform linear arrays, scaled by the distance-dependent large-scale gain
//! `10^((zeta - 10 c log10 d) / 10)` split evenly across paths. All randomness
//! comes from the generator passed in.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::model::{CMatrix, CVector, ChannelSet, SystemConfig, C64};

/// Small-scale parameters of one propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    /// Complex gain, circularly-symmetric standard normal.
    pub gain: C64,
    pub aod_ap: f64,
    pub aoa_irs: f64,
    pub aod_irs: f64,
}

impl PathParams {
    /// Draws a gain and three angles uniform on `[-pi/2, pi/2)`, always in
    /// the same order so that streams stay aligned across link types.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let gain = standard_complex_normal(rng);
        let mut angle = || rng.random::<f64>() * PI - FRAC_PI_2;
        PathParams {
            gain,
            aod_ap: angle(),
            aoa_irs: angle(),
            aod_irs: angle(),
        }
    }
}

/// One `CN(0, 1)` draw.
pub fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Large-scale path loss `zeta - 10 c log10(d)` in dB.
pub fn pathloss_db(distance: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(cfg.pathloss_ref_db - 10.0 * cfg.pathloss_exponent * distance.log10())
}

/// Linear power gain of a link of the given length.
pub fn linear_gain(distance: f64, cfg: &SystemConfig) -> Result<f64> {
    Ok(10f64.powf(pathloss_db(distance, cfg)? / 10.0))
}

/// ULA response `[exp(j pi k sin(angle))]_{k=0..n-1}`.
pub fn steering_vector(n: usize, angle: f64) -> CVector {
    let phase = PI * angle.sin();
    CVector::from_iterator(n, (0..n).map(|k| C64::from_polar(1.0, phase * k as f64)))
}

pub fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn ap_irs_matrix<R: Rng + ?Sized>(cfg: &SystemConfig, gain: f64, rng: &mut R) -> CMatrix {
    let mut g = CMatrix::zeros(cfg.n_refl, cfg.n_tx);
    for _ in 0..cfg.paths_ap_irs {
        let path = PathParams::sample(rng);
        let rx = steering_vector(cfg.n_refl, path.aoa_irs);
        let tx = steering_vector(cfg.n_tx, path.aod_ap);
        g += rx * tx.transpose() * path.gain;
    }
    g * C64::from((gain / cfg.paths_ap_irs as f64).sqrt())
}

fn irs_rx_vector<R: Rng + ?Sized>(n_refl: usize, paths: usize, gain: f64, rng: &mut R) -> CVector {
    let mut h = CVector::zeros(n_refl);
    for _ in 0..paths {
        let path = PathParams::sample(rng);
        h += steering_vector(n_refl, path.aod_irs) * path.gain;
    }
    h * C64::from((gain / paths as f64).sqrt())
}

/// Draws one channel realization. Per IRS the draw order is `G_l`, `h_l`,
/// `g_l`; the same generator state always yields the same channels.
pub fn gen_channels<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Result<ChannelSet> {
    cfg.validate()?;
    let mut set = ChannelSet {
        g_ap_irs: Vec::with_capacity(cfg.n_irs),
        h_irs_user: Vec::with_capacity(cfg.n_irs),
        g_irs_eve: Vec::with_capacity(cfg.n_irs),
    };
    for irs in &cfg.irs_positions {
        let ap_gain = linear_gain(distance(&cfg.ap_position, irs), cfg)?;
        let user_gain = linear_gain(distance(irs, &cfg.user_position), cfg)?;
        let eve_gain = linear_gain(distance(irs, &cfg.eve_position), cfg)?;
        set.g_ap_irs.push(ap_irs_matrix(cfg, ap_gain, rng));
        set.h_irs_user.push(irs_rx_vector(cfg.n_refl, cfg.paths_irs_user, user_gain, rng));
        set.g_irs_eve.push(irs_rx_vector(cfg.n_refl, cfg.paths_irs_eve, eve_gain, rng));
    }
    Ok(set)
}
