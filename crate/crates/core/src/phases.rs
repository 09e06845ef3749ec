//! Phase-shift optimization on the product of unit circles.
//!
//! For fixed beamformer and on-off vector the user and eavesdropper
//! amplitudes are linear in the stacked phases,
//! `u = sum_l x_l theta_l^T c_l` and `e = sum_l x_l theta_l^T d_l`, and the
//! block maximizes `log2(1 + |u|^2/s2) - log2(1 + |e|^2/se2)` by Riemannian
//! gradient ascent with elementwise-normalization retraction.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::model::{cascade_coefficients, ChannelSet, CVector, SolutionState, SystemConfig, C64};

/// Largest number of active elements [`phase_grid_oracle`] will enumerate.
pub const MAX_GRID_ELEMENTS: usize = 4;

/// Armijo sufficient-increase parameter.
const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGradient {
    /// Wirtinger gradient with respect to `conj(theta)`.
    pub euclidean: CVector,
    /// Projection onto the tangent space of the circles at `theta`.
    pub riemannian: CVector,
}

impl PhaseGradient {
    /// Derivatives with respect to the phase angles, `2 Im(g_k conj(theta_k))`.
    pub fn angle_derivatives(&self, phases: &CVector) -> Vec<f64> {
        self.euclidean.iter().zip(phases.iter()).map(|(g, t)| 2.0 * (g * t.conj()).im).collect()
    }
}

/// Per-element cascade coefficients with inactive blocks zeroed.
#[derive(Debug, Clone)]
struct Cascade {
    user: CVector,
    eve: CVector,
    active: Vec<bool>,
    noise_user: f64,
    noise_eve: f64,
}

impl Cascade {
    fn new(ch: &ChannelSet, sol: &SolutionState, cfg: &SystemConfig) -> Result<Self> {
        let n_refl = ch.n_refl();
        let total = ch.n_irs() * n_refl;
        if sol.phases.len() != total
            || sol.onoff.len() != ch.n_irs()
            || sol.beamformer.len() != ch.n_tx()
        {
            return Err(Error::DimensionMismatch("solution does not match channel set".into()));
        }
        let (c, d) = cascade_coefficients(ch, &sol.beamformer);
        let mut user = CVector::zeros(total);
        let mut eve = CVector::zeros(total);
        let mut active = vec![false; total];
        for l in (0..ch.n_irs()).filter(|&l| sol.onoff[l]) {
            let range = l * n_refl..(l + 1) * n_refl;
            user.rows_mut(range.start, n_refl).copy_from(&c[l]);
            eve.rows_mut(range.start, n_refl).copy_from(&d[l]);
            active[range].fill(true);
        }
        Ok(Cascade {
            user,
            eve,
            active,
            noise_user: cfg.noise_user,
            noise_eve: cfg.noise_eve,
        })
    }

    fn amplitudes(&self, phases: &CVector) -> (C64, C64) {
        let u = phases.iter().zip(self.user.iter()).map(|(t, c)| t * c).sum();
        let e = phases.iter().zip(self.eve.iter()).map(|(t, c)| t * c).sum();
        (u, e)
    }

    fn value_of(&self, u: C64, e: C64) -> f64 {
        (u.norm_sqr() / self.noise_user).ln_1p() / LN_2
            - (e.norm_sqr() / self.noise_eve).ln_1p() / LN_2
    }

    fn value(&self, phases: &CVector) -> f64 {
        let (u, e) = self.amplitudes(phases);
        self.value_of(u, e)
    }

    fn gradient(&self, phases: &CVector) -> PhaseGradient {
        let (u, e) = self.amplitudes(phases);
        let ku = u / ((self.noise_user + u.norm_sqr()) * LN_2);
        let ke = e / ((self.noise_eve + e.norm_sqr()) * LN_2);
        let euclidean = CVector::from_iterator(
            phases.len(),
            self.user.iter().zip(self.eve.iter()).map(|(c, d)| ku * c.conj() - ke * d.conj()),
        );
        let riemannian = CVector::from_iterator(
            phases.len(),
            euclidean.iter().zip(phases.iter()).map(|(g, t)| g - t * (g * t.conj()).re),
        );
        PhaseGradient { euclidean, riemannian }
    }
}

/// Objective `I - I_e` (unclamped) and its gradient at `sol.phases`.
pub fn phase_objective_gradient(
    ch: &ChannelSet,
    sol: &SolutionState,
    cfg: &SystemConfig,
) -> Result<PhaseGradient> {
    Ok(Cascade::new(ch, sol, cfg)?.gradient(&sol.phases))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoOptions {
    pub max_iter: usize,
    /// Stop once an iteration improves the objective by less than this.
    pub tol: f64,
}

impl Default for MoOptions {
    fn default() -> Self {
        MoOptions { max_iter: 500, tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoOutcome {
    pub phases: CVector,
    /// Objective after every accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

fn retract(phases: &CVector, step: &CVector, alpha: f64) -> CVector {
    CVector::from_iterator(
        phases.len(),
        phases.iter().zip(step.iter()).map(|(t, s)| {
            if *s == C64::new(0.0, 0.0) {
                return *t;
            }
            let moved = t + s * alpha;
            let norm = moved.norm();
            if norm > 0.0 {
                moved / norm
            } else {
                *t
            }
        }),
    )
}

/// Riemannian gradient ascent with Armijo backtracking.
///
/// Inactive IRS blocks keep their input phases. The returned trace is
/// non-decreasing; a stationary input is returned unchanged.
pub fn mo_ascend(
    ch: &ChannelSet,
    sol: &SolutionState,
    cfg: &SystemConfig,
    opts: &MoOptions,
) -> Result<MoOutcome> {
    let cascade = Cascade::new(ch, sol, cfg)?;
    let mut phases = sol.phases.clone();
    let mut value = cascade.value(&phases);
    let mut trace = vec![value];
    for _ in 0..opts.max_iter {
        let grad = cascade.gradient(&phases);
        let xi = grad.riemannian;
        let largest = xi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if largest == 0.0 || !largest.is_finite() {
            break;
        }
        // slope of the objective along xi at alpha = 0
        let slope = 2.0 * xi.norm_squared();
        let mut alpha = 0.5 / largest;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = retract(&phases, &xi, alpha);
            let v = cascade.value(&cand);
            if v >= value + ARMIJO * alpha * slope {
                accepted = Some((cand, v));
                break;
            }
            alpha *= 0.5;
        }
        let Some((cand, v)) = accepted else { break };
        let gain = v - value;
        phases = cand;
        value = v;
        trace.push(value);
        if gain.abs() < opts.tol {
            break;
        }
    }
    Ok(MoOutcome { phases, trace })
}

/// Exhaustive search over `resolution` equally spaced angles per active
/// element, at most [`MAX_GRID_ELEMENTS`] of them. Inactive elements keep
/// their input phases.
pub fn phase_grid_oracle(
    ch: &ChannelSet,
    sol: &SolutionState,
    cfg: &SystemConfig,
    resolution: usize,
) -> Result<(CVector, f64)> {
    let cascade = Cascade::new(ch, sol, cfg)?;
    let free: Vec<usize> = (0..sol.phases.len()).filter(|&k| cascade.active[k]).collect();
    if free.len() > MAX_GRID_ELEMENTS {
        return Err(Error::TooLarge {
            what: "active phase elements",
            got: free.len(),
            limit: MAX_GRID_ELEMENTS,
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidConfig("grid resolution must be positive".into()));
    }
    let grid: Vec<C64> =
        (0..resolution).map(|i| C64::from_polar(1.0, 2.0 * PI * i as f64 / resolution as f64)).collect();
    let mut best_phases = sol.phases.clone();
    let mut best = f64::NEG_INFINITY;
    let mut index = vec![0usize; free.len()];
    loop {
        let mut u = C64::new(0.0, 0.0);
        let mut e = C64::new(0.0, 0.0);
        for (slot, &k) in free.iter().enumerate() {
            let t = grid[index[slot]];
            u += t * cascade.user[k];
            e += t * cascade.eve[k];
        }
        let v = cascade.value_of(u, e);
        if v > best {
            best = v;
            for (slot, &k) in free.iter().enumerate() {
                best_phases[k] = grid[index[slot]];
            }
        }
        // odometer increment
        let mut slot = 0;
        while slot < index.len() {
            index[slot] += 1;
            if index[slot] < resolution {
                break;
            }
            index[slot] = 0;
            slot += 1;
        }
        if slot == index.len() {
            break;
        }
    }
    Ok((best_phases, best))
}
