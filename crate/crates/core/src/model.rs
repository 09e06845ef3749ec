//! Domain types and exact rate evaluation.
//!
//! Received amplitudes follow the cascaded model
//! `y = sum_l x_l h_l^H diag(theta_l) G_l w s + n`, with the same structure at
//! the eavesdropper through `g_l`. Noise powers are always in watts here; dBm
//! is converted once at the configuration boundary.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance on `|theta| = 1` accepted by [`SolutionState::validate`].
pub const UNIT_MODULUS_TOL: f64 = 1e-9;
/// Slack on `||w||^2 <= P` accepted by [`SolutionState::validate`].
pub const POWER_TOL: f64 = 1e-9;

/// Converts a power in dBm to watts.
pub fn dbm_to_watt(p_dbm: f64) -> Result<f64> {
    if !p_dbm.is_finite() {
        return Err(Error::NonFinite("power in dBm"));
    }
    Ok(10f64.powf((p_dbm - 30.0) / 10.0))
}

/// Inverse of [`dbm_to_watt`].
pub fn watt_to_dbm(p_watt: f64) -> f64 {
    10.0 * p_watt.log10() + 30.0
}

/// Physical and numerical parameters of one deployment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// AP antenna count.
    pub n_tx: usize,
    /// Reflecting elements per IRS.
    pub n_refl: usize,
    /// Number of IRSs.
    pub n_irs: usize,
    /// User noise power in watts.
    pub noise_user: f64,
    /// Eavesdropper noise power in watts.
    pub noise_eve: f64,
    /// Transmit power budget in watts.
    pub power_budget: f64,
    pub ap_position: [f64; 3],
    pub irs_positions: Vec<[f64; 3]>,
    pub user_position: [f64; 3],
    pub eve_position: [f64; 3],
    pub pathloss_exponent: f64,
    /// Path loss at the 1 m reference distance, in dB.
    pub pathloss_ref_db: f64,
    pub paths_ap_irs: usize,
    pub paths_irs_user: usize,
    pub paths_irs_eve: usize,
    pub seed: u64,
}

impl Default for SystemConfig {
    /// Three 16-element IRSs serving a single-antenna user next to an
    /// eavesdropper, 16 AP antennas, -110 dBm noise and a 30 dBm budget.
    fn default() -> Self {
        let noise = 1e-14;
        SystemConfig {
            n_tx: 16,
            n_refl: 16,
            n_irs: 3,
            noise_user: noise,
            noise_eve: noise,
            power_budget: 1.0,
            ap_position: [0.0, 0.0, 0.0],
            irs_positions: vec![[0.0, 20.0, 20.0], [0.0, 40.0, 20.0], [0.0, 60.0, 20.0]],
            user_position: [5.0, 40.0, 0.0],
            eve_position: [5.0, 60.0, 0.0],
            pathloss_exponent: 2.2,
            pathloss_ref_db: -61.4,
            paths_ap_irs: 3,
            paths_irs_user: 3,
            paths_irs_eve: 3,
            seed: 0,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_tx", self.n_tx),
            ("n_refl", self.n_refl),
            ("n_irs", self.n_irs),
            ("paths_ap_irs", self.paths_ap_irs),
            ("paths_irs_user", self.paths_irs_user),
            ("paths_irs_eve", self.paths_irs_eve),
        ];
        for (name, n) in counts {
            if n == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        let powers = [
            ("noise_user", self.noise_user),
            ("noise_eve", self.noise_eve),
            ("power_budget", self.power_budget),
        ];
        for (name, p) in powers {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {p}")));
            }
        }
        if self.irs_positions.len() != self.n_irs {
            return Err(Error::InvalidConfig(format!(
                "{} IRS positions given for n_irs = {}",
                self.irs_positions.len(),
                self.n_irs
            )));
        }
        let all_points = [&self.ap_position, &self.user_position, &self.eve_position]
            .into_iter()
            .chain(self.irs_positions.iter());
        for p in all_points {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConfig("positions must be finite".into()));
            }
        }
        if !self.pathloss_ref_db.is_finite() || !self.pathloss_exponent.is_finite() {
            return Err(Error::InvalidConfig("path loss parameters must be finite".into()));
        }
        Ok(())
    }

    /// Total reflecting elements across all IRSs.
    pub fn total_elements(&self) -> usize {
        self.n_irs * self.n_refl
    }

    /// The same deployment with every reflecting element consolidated into a
    /// single IRS at `position`.
    pub fn consolidated(&self, position: [f64; 3]) -> SystemConfig {
        SystemConfig {
            n_refl: self.total_elements(),
            n_irs: 1,
            irs_positions: vec![position],
            ..self.clone()
        }
    }
}

/// One channel realization: per-IRS AP-to-IRS matrices and IRS-to-receiver
/// vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// `G_l`, `n_refl x n_tx`.
    pub g_ap_irs: Vec<CMatrix>,
    /// `h_l`, length `n_refl`.
    pub h_irs_user: Vec<CVector>,
    /// `g_l`, length `n_refl`.
    pub g_irs_eve: Vec<CVector>,
}

impl ChannelSet {
    pub fn n_irs(&self) -> usize {
        self.g_ap_irs.len()
    }

    pub fn n_tx(&self) -> usize {
        self.g_ap_irs.first().map_or(0, |g| g.ncols())
    }

    pub fn n_refl(&self) -> usize {
        self.g_ap_irs.first().map_or(0, |g| g.nrows())
    }

    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        let l = cfg.n_irs;
        if self.g_ap_irs.len() != l || self.h_irs_user.len() != l || self.g_irs_eve.len() != l {
            return Err(Error::DimensionMismatch(format!("expected {l} IRS blocks")));
        }
        for i in 0..l {
            let g = &self.g_ap_irs[i];
            if g.nrows() != cfg.n_refl || g.ncols() != cfg.n_tx {
                return Err(Error::DimensionMismatch(format!(
                    "G_{i} is {}x{}, expected {}x{}",
                    g.nrows(),
                    g.ncols(),
                    cfg.n_refl,
                    cfg.n_tx
                )));
            }
            if self.h_irs_user[i].len() != cfg.n_refl || self.g_irs_eve[i].len() != cfg.n_refl {
                return Err(Error::DimensionMismatch(format!("receiver vectors of IRS {i}")));
            }
            let finite = g.iter().chain(self.h_irs_user[i].iter()).chain(self.g_irs_eve[i].iter());
            if finite.into_iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("channel entry"));
            }
        }
        Ok(())
    }
}

/// The alternating-optimization iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    /// Transmit beamformer `w`.
    pub beamformer: CVector,
    /// Reflection coefficients of every IRS stacked block by block.
    pub phases: CVector,
    /// IRS activation flags.
    pub onoff: Vec<bool>,
}

impl SolutionState {
    /// Slice of the stacked phase vector belonging to IRS `l`.
    pub fn phase_block(&self, l: usize, n_refl: usize) -> nalgebra::DVectorView<'_, C64> {
        self.phases.rows(l * n_refl, n_refl)
    }

    pub fn n_active(&self) -> usize {
        self.onoff.iter().filter(|&&on| on).count()
    }

    /// Checks power, unit-modulus and dimension constraints.
    pub fn validate(&self, cfg: &SystemConfig) -> Result<()> {
        if self.beamformer.len() != cfg.n_tx {
            return Err(Error::DimensionMismatch("beamformer length".into()));
        }
        if self.phases.len() != cfg.total_elements() {
            return Err(Error::DimensionMismatch("phase vector length".into()));
        }
        if self.onoff.len() != cfg.n_irs {
            return Err(Error::DimensionMismatch("on-off vector length".into()));
        }
        let power = self.beamformer.norm_squared();
        if power > cfg.power_budget + POWER_TOL * cfg.power_budget.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "beamformer power {power} exceeds budget {}",
                cfg.power_budget
            )));
        }
        if self.phases.iter().any(|t| (t.norm() - 1.0).abs() > UNIT_MODULUS_TOL) {
            return Err(Error::InvalidConfig("phase entries must have unit modulus".into()));
        }
        Ok(())
    }
}

/// Aggregated channels `a` and `b` with `a^H w` the user's received amplitude
/// and `b^H w` the eavesdropper's, for fixed phases and on-off status.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePair {
    pub eff_user: CVector,
    pub eff_eve: CVector,
}

impl EffectivePair {
    pub fn n_tx(&self) -> usize {
        self.eff_user.len()
    }
}

fn check_solution_dims(ch: &ChannelSet, sol: &SolutionState) -> Result<()> {
    let n_refl = ch.n_refl();
    if sol.onoff.len() != ch.n_irs() {
        return Err(Error::DimensionMismatch(format!(
            "{} on-off flags for {} IRSs",
            sol.onoff.len(),
            ch.n_irs()
        )));
    }
    if sol.phases.len() != ch.n_irs() * n_refl {
        return Err(Error::DimensionMismatch(format!(
            "phase vector has {} entries, expected {}",
            sol.phases.len(),
            ch.n_irs() * n_refl
        )));
    }
    Ok(())
}

/// Computes `a = sum_l x_l G_l^H diag(conj theta_l) h_l` and the
/// eavesdropper analogue `b`.
pub fn effective_channels(ch: &ChannelSet, sol: &SolutionState) -> Result<EffectivePair> {
    check_solution_dims(ch, sol)?;
    let n_refl = ch.n_refl();
    let mut eff_user = CVector::zeros(ch.n_tx());
    let mut eff_eve = CVector::zeros(ch.n_tx());
    for l in (0..ch.n_irs()).filter(|&l| sol.onoff[l]) {
        let theta = sol.phase_block(l, n_refl);
        let g = &ch.g_ap_irs[l];
        let user_refl = theta.conjugate().component_mul(&ch.h_irs_user[l]);
        let eve_refl = theta.conjugate().component_mul(&ch.g_irs_eve[l]);
        eff_user += g.ad_mul(&user_refl);
        eff_eve += g.ad_mul(&eve_refl);
    }
    Ok(EffectivePair { eff_user, eff_eve })
}

/// `log2(1 + |eff^H w|^2 / noise)`.
pub fn achievable_rate(eff: &CVector, w: &CVector, noise: f64) -> f64 {
    (eff.dotc(w).norm_sqr() / noise).ln_1p() / std::f64::consts::LN_2
}

/// Unclamped rate difference `I - I_e` for a beamformer against fixed
/// effective channels. Optimizers ascend this rather than the clamped value.
pub fn pair_objective(eff: &EffectivePair, w: &CVector, cfg: &SystemConfig) -> f64 {
    achievable_rate(&eff.eff_user, w, cfg.noise_user)
        - achievable_rate(&eff.eff_eve, w, cfg.noise_eve)
}

/// Unclamped `I - I_e` of a full solution.
pub fn secrecy_objective(ch: &ChannelSet, sol: &SolutionState, cfg: &SystemConfig) -> Result<f64> {
    let eff = effective_channels(ch, sol)?;
    Ok(pair_objective(&eff, &sol.beamformer, cfg))
}

/// Secrecy rate `[I - I_e]^+` in bits/s/Hz.
pub fn secrecy_rate(ch: &ChannelSet, sol: &SolutionState, cfg: &SystemConfig) -> Result<f64> {
    Ok(secrecy_objective(ch, sol, cfg)?.max(0.0))
}

/// Per-element cascaded coefficients for beamformer `w`:
/// `c_l = conj(h_l) .* (G_l w)` and `d_l = conj(g_l) .* (G_l w)`, so that
/// IRS `l` contributes `theta_l^T c_l` to the user amplitude.
pub fn cascade_coefficients(ch: &ChannelSet, w: &CVector) -> (Vec<CVector>, Vec<CVector>) {
    let mut user = Vec::with_capacity(ch.n_irs());
    let mut eve = Vec::with_capacity(ch.n_irs());
    for l in 0..ch.n_irs() {
        let incident = &ch.g_ap_irs[l] * w;
        user.push(ch.h_irs_user[l].conjugate().component_mul(&incident));
        eve.push(ch.g_irs_eve[l].conjugate().component_mul(&incident));
    }
    (user, eve)
}

/// Phases `exp(-j arg c_k)` that make every user-side cascaded term real and
/// positive, i.e. coherent combining at the user.
pub fn user_aligned_phases(ch: &ChannelSet, w: &CVector) -> CVector {
    let (user, _) = cascade_coefficients(ch, w);
    let entries: Vec<C64> = user
        .iter()
        .flat_map(|c| c.iter().map(|z| C64::from_polar(1.0, -z.arg())).collect::<Vec<_>>())
        .collect();
    CVector::from_vec(entries)
}

/// Matched-filter beamformer `sqrt(P) a / ||a||`; zero when `a = 0`.
pub fn mrt_beamformer(eff_user: &CVector, power: f64) -> CVector {
    let norm = eff_user.norm();
    if norm == 0.0 {
        return CVector::zeros(eff_user.len());
    }
    eff_user * C64::from(power.sqrt() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_setup(h: C64, theta: C64, g: C64) -> (ChannelSet, SolutionState) {
        let ch = ChannelSet {
            g_ap_irs: vec![CMatrix::from_element(1, 1, g)],
            h_irs_user: vec![CVector::from_element(1, h)],
            g_irs_eve: vec![CVector::from_element(1, h)],
        };
        let sol = SolutionState {
            beamformer: CVector::from_element(1, C64::new(1.0, 0.0)),
            phases: CVector::from_element(1, theta),
            onoff: vec![true],
        };
        (ch, sol)
    }

    #[test]
    fn dbm_conversions() {
        assert_close!(dbm_to_watt(-110.0).unwrap(), 1e-14, 1e-28);
        assert_close!(dbm_to_watt(30.0).unwrap(), 1.0, 1e-15);
        assert_close!(dbm_to_watt(0.0).unwrap(), 1e-3, 1e-18);
        assert!(dbm_to_watt(f64::NAN).is_err());
        assert!(dbm_to_watt(f64::INFINITY).is_err());
        assert_close!(watt_to_dbm(1.0), 30.0, 1e-12);
    }

    #[test]
    fn scalar_effective_channel() {
        let one = C64::new(1.0, 0.0);
        let (ch, sol) = scalar_setup(one, one, C64::new(2.0, 0.0));
        let eff = effective_channels(&ch, &sol).unwrap();
        assert_close!((eff.eff_user[0] - C64::new(2.0, 0.0)).norm(), 0.0, 1e-15);
    }

    #[test]
    fn switched_off_irs_contributes_nothing() {
        let (ch, mut sol) = scalar_setup(C64::new(0.3, 1.0), C64::new(0.0, 1.0), C64::new(2.0, -1.0));
        sol.onoff = vec![false];
        let eff = effective_channels(&ch, &sol).unwrap();
        assert_eq!(eff.eff_user.norm(), 0.0);
        assert_eq!(eff.eff_eve.norm(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let one = C64::new(1.0, 0.0);
        let (ch, mut sol) = scalar_setup(one, one, one);
        sol.onoff = vec![true, true];
        assert!(matches!(effective_channels(&ch, &sol), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rate_values() {
        let eff = CVector::from_element(1, C64::new(1.0, 0.0));
        let noise = 0.25;
        let zero = CVector::from_element(1, C64::new(0.0, 0.0));
        assert_eq!(achievable_rate(&eff, &zero, noise), 0.0);
        let w = CVector::from_element(1, C64::new(0.0, 0.5));
        assert_close!(achievable_rate(&eff, &w, noise), 1.0, 1e-14);
        let w = CVector::from_element(1, C64::new(3f64.sqrt() * 0.5, 0.0));
        assert_close!(achievable_rate(&eff, &w, noise), 2.0, 1e-14);
    }

    fn two_rate_setup(user_snr: f64, eve_snr: f64) -> (ChannelSet, SolutionState, SystemConfig) {
        let cfg = SystemConfig {
            n_tx: 1,
            n_refl: 1,
            n_irs: 1,
            noise_user: 1.0,
            noise_eve: 1.0,
            irs_positions: vec![[0.0, 1.0, 1.0]],
            ..SystemConfig::default()
        };
        let ch = ChannelSet {
            g_ap_irs: vec![CMatrix::from_element(1, 1, C64::new(1.0, 0.0))],
            h_irs_user: vec![CVector::from_element(1, C64::new(user_snr.sqrt(), 0.0))],
            g_irs_eve: vec![CVector::from_element(1, C64::new(eve_snr.sqrt(), 0.0))],
        };
        let sol = SolutionState {
            beamformer: CVector::from_element(1, C64::new(1.0, 0.0)),
            phases: CVector::from_element(1, C64::new(1.0, 0.0)),
            onoff: vec![true],
        };
        (ch, sol, cfg)
    }

    #[test]
    fn secrecy_rate_subtracts_and_clamps() {
        // I = log2(1 + 3) = 2, I_e = log2(1 + sqrt(2) - 1) = 0.5
        let (ch, sol, cfg) = two_rate_setup(3.0, 2f64.sqrt() - 1.0);
        assert_close!(secrecy_rate(&ch, &sol, &cfg).unwrap(), 1.5, 1e-12);
        let (ch, sol, cfg) = two_rate_setup(2f64.sqrt() - 1.0, 3.0);
        assert_eq!(secrecy_rate(&ch, &sol, &cfg).unwrap(), 0.0);
        assert_close!(secrecy_objective(&ch, &sol, &cfg).unwrap(), -1.5, 1e-12);
        let (ch, sol, cfg) = two_rate_setup(5.0, 5.0);
        assert_eq!(secrecy_rate(&ch, &sol, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = SystemConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.total_elements(), 48);
        let single = cfg.consolidated([0.0, 60.0, 20.0]);
        single.validate().unwrap();
        assert_eq!(single.n_refl, 48);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = SystemConfig::default();
        cfg.n_refl = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = SystemConfig::default();
        cfg.power_budget = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = SystemConfig::default();
        cfg.irs_positions.pop();
        assert!(cfg.validate().is_err());
        let mut cfg = SystemConfig::default();
        cfg.eve_position[1] = f64::NAN;
        assert!(cfg.validate().is_err());
    }
}
