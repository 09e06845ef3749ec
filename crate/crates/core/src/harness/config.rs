//! JSON experiment configuration. Powers are given in dBm here and converted
//! to watts when a [`SystemConfig`] is built.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{dbm_to_watt, SystemConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_tx: usize,
    pub n_refl: usize,
    pub n_irs: usize,
    pub noise_user_dbm: f64,
    pub noise_eve_dbm: f64,
    /// Transmit power for the convergence and element experiments.
    pub power_dbm: f64,
    pub ap_position: [f64; 3],
    pub irs_positions: Vec<[f64; 3]>,
    pub user_position: [f64; 3],
    pub eve_position: [f64; 3],
    pub pathloss_exponent: f64,
    pub pathloss_ref_db: f64,
    pub paths_ap_irs: usize,
    pub paths_irs_user: usize,
    pub paths_irs_eve: usize,
    /// Master seed used when the command line does not give one.
    pub seed: u64,
    pub power_grid_dbm: Vec<f64>,
    /// Elements per IRS for the element sweep.
    pub element_grid: Vec<usize>,
    /// Where the consolidated single-IRS baseline sits.
    pub single_irs_position: [f64; 3],
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let sys = SystemConfig::default();
        ExperimentConfig {
            n_tx: sys.n_tx,
            n_refl: sys.n_refl,
            n_irs: sys.n_irs,
            noise_user_dbm: -110.0,
            noise_eve_dbm: -110.0,
            power_dbm: 30.0,
            ap_position: sys.ap_position,
            irs_positions: sys.irs_positions,
            user_position: sys.user_position,
            eve_position: sys.eve_position,
            pathloss_exponent: sys.pathloss_exponent,
            pathloss_ref_db: sys.pathloss_ref_db,
            paths_ap_irs: sys.paths_ap_irs,
            paths_irs_user: sys.paths_irs_user,
            paths_irs_eve: sys.paths_irs_eve,
            seed: sys.seed,
            power_grid_dbm: (0..=8).map(|k| 5.0 * k as f64).collect(),
            element_grid: vec![4, 8, 16, 32, 64],
            single_irs_position: [0.0, 60.0, 20.0],
        }
    }
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.system()?;
        if self.power_grid_dbm.is_empty() || self.element_grid.is_empty() {
            return Err(Error::InvalidConfig("sweep grids must not be empty".into()));
        }
        if self.power_grid_dbm.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig("power grid entries must be finite".into()));
        }
        if self.element_grid.contains(&0) {
            return Err(Error::InvalidConfig("element grid entries must be positive".into()));
        }
        if self.single_irs_position.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig("single-IRS position must be finite".into()));
        }
        Ok(())
    }

    /// System parameters at the configured power.
    pub fn system(&self) -> Result<SystemConfig> {
        self.system_at(self.power_dbm)
    }

    /// System parameters with the power budget set to `power_dbm`.
    pub fn system_at(&self, power_dbm: f64) -> Result<SystemConfig> {
        let sys = SystemConfig {
            n_tx: self.n_tx,
            n_refl: self.n_refl,
            n_irs: self.n_irs,
            noise_user: dbm_to_watt(self.noise_user_dbm)?,
            noise_eve: dbm_to_watt(self.noise_eve_dbm)?,
            power_budget: dbm_to_watt(power_dbm)?,
            ap_position: self.ap_position,
            irs_positions: self.irs_positions.clone(),
            user_position: self.user_position,
            eve_position: self.eve_position,
            pathloss_exponent: self.pathloss_exponent,
            pathloss_ref_db: self.pathloss_ref_db,
            paths_ap_irs: self.paths_ap_irs,
            paths_irs_user: self.paths_irs_user,
            paths_irs_eve: self.paths_irs_eve,
            seed: self.seed,
        };
        sys.validate()?;
        Ok(sys)
    }
}
