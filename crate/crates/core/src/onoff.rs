//! IRS on-off selection for fixed beamformer and phases.
//!
//! The block maximizes the SNR ratio
//! `N(x) / D(x) = (1 + |sum_l x_l s_l|^2 / s2) / (1 + |sum_l x_l t_l|^2 / se2)`
//! over binary `x`, where `s_l = h_l^H Theta_l G_l w` and `t_l` is the
//! eavesdropper analogue. Both squared sums are expanded into self and cross
//! gains ([`RatioCoefficients`]); Dinkelbach's parametric method turns the
//! ratio into a sequence of problems `max N(x) - lambda D(x)`, each attacked by
//! linearizing `x_l x_m` with McCormick inequalities, dualizing them and
//! running closed-form coordinate rules plus projected subgradient steps on
//! the multipliers.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{cascade_coefficients, ChannelSet, SolutionState, SystemConfig, C64};

/// Largest IRS count accepted by [`brute_force_onoff`].
pub const MAX_ENUMERATION_IRS: usize = 24;

/// Relative gap under which two ratios count as tied during enumeration.
const TIE_TOL: f64 = 1e-12;

/// Quadratic-form expansion of the user and eavesdropper gains:
/// `|sum_l x_l s_l|^2 = sum_l C_l x_l + sum_{l > m} C_lm x_l x_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCoefficients {
    /// `C_l = |s_l|^2`.
    pub c_lin: Vec<f64>,
    /// Row `l` holds `C_lm = 2 Re(s_l conj(s_m))` for `m < l`.
    pub c_cross: Vec<Vec<f64>>,
    pub d_lin: Vec<f64>,
    pub d_cross: Vec<Vec<f64>>,
}

impl RatioCoefficients {
    /// Expansion for per-IRS user amplitudes `user[l]` and eavesdropper
    /// amplitudes `eve[l]`.
    pub fn from_amplitudes(user: &[C64], eve: &[C64]) -> Self {
        let lin = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).collect();
        let cross = |v: &[C64]| {
            (0..v.len())
                .map(|l| (0..l).map(|m| 2.0 * (v[l] * v[m].conj()).re).collect())
                .collect()
        };
        RatioCoefficients {
            c_lin: lin(user),
            c_cross: cross(user),
            d_lin: lin(eve),
            d_cross: cross(eve),
        }
    }

    pub fn n_irs(&self) -> usize {
        self.c_lin.len()
    }

    fn quad(lin: &[f64], cross: &[Vec<f64>], x: &[bool]) -> f64 {
        let mut total = 0.0;
        for l in 0..lin.len() {
            if !x[l] {
                continue;
            }
            total += lin[l];
            for m in 0..l {
                if x[m] {
                    total += cross[l][m];
                }
            }
        }
        total
    }

    /// `|sum x_l s_l|^2` reconstructed from the coefficients.
    pub fn user_gain(&self, x: &[bool]) -> f64 {
        Self::quad(&self.c_lin, &self.c_cross, x)
    }

    pub fn eve_gain(&self, x: &[bool]) -> f64 {
        Self::quad(&self.d_lin, &self.d_cross, x)
    }

    /// `N(x) = 1 + user_gain / s2`.
    pub fn numerator(&self, x: &[bool], cfg: &SystemConfig) -> f64 {
        1.0 + self.user_gain(x) / cfg.noise_user
    }

    /// `D(x) = 1 + eve_gain / se2`.
    pub fn denominator(&self, x: &[bool], cfg: &SystemConfig) -> f64 {
        1.0 + self.eve_gain(x) / cfg.noise_eve
    }

    pub fn ratio(&self, x: &[bool], cfg: &SystemConfig) -> f64 {
        self.numerator(x, cfg) / self.denominator(x, cfg)
    }

    /// Dinkelbach objective `N(x) - lambda D(x)`.
    pub fn parametric(&self, x: &[bool], lambda: f64, cfg: &SystemConfig) -> f64 {
        self.numerator(x, cfg) - lambda * self.denominator(x, cfg)
    }

    fn cross_sym(cross: &[Vec<f64>], l: usize, m: usize) -> f64 {
        if l > m {
            cross[l][m]
        } else {
            cross[m][l]
        }
    }
}

/// Per-IRS amplitudes and their expansion for the current beamformer and
/// phases. The on-off vector of `sol` is ignored.
pub fn ratio_coefficients(ch: &ChannelSet, sol: &SolutionState) -> Result<RatioCoefficients> {
    if sol.phases.len() != ch.n_irs() * ch.n_refl() || sol.beamformer.len() != ch.n_tx() {
        return Err(Error::DimensionMismatch("solution does not match channel set".into()));
    }
    let (user, eve) = cascade_coefficients(ch, &sol.beamformer);
    let n_refl = ch.n_refl();
    let amplitude = |c: &crate::model::CVector, l: usize| {
        sol.phase_block(l, n_refl).iter().zip(c.iter()).map(|(t, c)| t * c).sum::<C64>()
    };
    let s: Vec<C64> = user.iter().enumerate().map(|(l, c)| amplitude(c, l)).collect();
    let t: Vec<C64> = eve.iter().enumerate().map(|(l, c)| amplitude(c, l)).collect();
    Ok(RatioCoefficients::from_amplitudes(&s, &t))
}

/// Strictly lower-triangular table indexed `[l][m]`, `m < l`.
pub type LowerTri<T> = Vec<Vec<T>>;

fn lower_tri<T: Clone>(n: usize, value: T) -> LowerTri<T> {
    (0..n).map(|l| vec![value.clone(); l]).collect()
}

/// Multipliers of the three McCormick inequalities per pair plus the
/// Dinkelbach parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    /// Multiplier of `z_lm >= x_l + x_m - 1`.
    pub mult1: LowerTri<f64>,
    /// Multiplier of `z_lm <= x_l`.
    pub mult2: LowerTri<f64>,
    /// Multiplier of `z_lm <= x_m`.
    pub mult3: LowerTri<f64>,
    /// Dinkelbach parameter `lambda`.
    pub dink_param: f64,
    /// Base step `beta`; iteration `t` uses `beta / sqrt(t)`.
    pub step0: f64,
}

impl DualState {
    pub fn new(n_irs: usize, dink_param: f64, step0: f64) -> Self {
        DualState {
            mult1: lower_tri(n_irs, 0.0),
            mult2: lower_tri(n_irs, 0.0),
            mult3: lower_tri(n_irs, 0.0),
            dink_param,
            step0,
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.mult1.len()).flat_map(|l| (0..l).map(move |m| (l, m)))
    }

    /// Largest absolute multiplier difference to `other`.
    pub fn distance(&self, other: &DualState) -> f64 {
        self.pairs()
            .map(|(l, m)| {
                (self.mult1[l][m] - other.mult1[l][m])
                    .abs()
                    .max((self.mult2[l][m] - other.mult2[l][m]).abs())
                    .max((self.mult3[l][m] - other.mult3[l][m]).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// How activation and product scores are assembled from the multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreRule {
    /// Coordinate-wise maximizer of the Lagrangian in which every McCormick
    /// inequality enters with its own sign: `x_l = 1` iff
    /// `C_l/s2 - lambda D_l/se2 - sum mu1 + sum mu2 (as x_l) + sum mu3 (as x_m) > 0`
    /// and `z_lm = 1` iff `C_lm/s2 - lambda D_lm/se2 + mu1 - mu2 - mu3 > 0`.
    #[default]
    Stationarity,
    /// The activation score exactly as typeset in the closed-form theorem
    /// (eavesdropper term only, with its per-position multiplier index sets)
    /// and `z_lm = 1` iff `sum mu + (1/s2 - lambda/se2) D_lm < 0`, with the
    /// typeset multiplier updates `mu2 -= beta (z - x_l)`, `mu3 -= beta (z - x_m)`.
    Printed,
}

/// Activation scores `S_l` and product scores `S_lm`.
pub fn dual_scores(
    coef: &RatioCoefficients,
    dual: &DualState,
    cfg: &SystemConfig,
    rule: ScoreRule,
) -> (Vec<f64>, LowerTri<f64>) {
    let n = coef.n_irs();
    let lambda = dual.dink_param;
    let (inv_u, inv_e) = (1.0 / cfg.noise_user, 1.0 / cfg.noise_eve);
    let mut single = vec![0.0; n];
    let mut pair = lower_tri(n, 0.0);
    match rule {
        ScoreRule::Stationarity => {
            for l in 0..n {
                single[l] = inv_u * coef.c_lin[l] - lambda * inv_e * coef.d_lin[l];
            }
            for l in 0..n {
                for m in 0..l {
                    let (mu1, mu2, mu3) = (dual.mult1[l][m], dual.mult2[l][m], dual.mult3[l][m]);
                    single[l] += mu2 - mu1;
                    single[m] += mu3 - mu1;
                    pair[l][m] = inv_u * coef.c_cross[l][m] - lambda * inv_e * coef.d_cross[l][m]
                        + mu1
                        - mu2
                        - mu3;
                }
            }
        }
        ScoreRule::Printed => {
            for l in 0..n {
                let mut sum = 0.0;
                if l == 0 {
                    for m in 1..n {
                        sum += dual.mult1[m][0] + dual.mult2[m][0] + dual.mult3[m][0];
                    }
                } else {
                    for m in 0..l {
                        sum += dual.mult1[l][m] + dual.mult2[l][m];
                    }
                    for m in l + 1..n {
                        sum += dual.mult3[m][l] + dual.mult1[m][l];
                    }
                }
                single[l] = sum + (lambda * inv_e - inv_u) * coef.d_lin[l];
            }
            for l in 0..n {
                for m in 0..l {
                    pair[l][m] = dual.mult1[l][m] + dual.mult2[l][m] + dual.mult3[l][m]
                        + (inv_u - lambda * inv_e) * coef.d_cross[l][m];
                }
            }
        }
    }
    (single, pair)
}

/// Closed-form `(x, z)` update for fixed multipliers.
pub fn dual_coordinate_update(
    coef: &RatioCoefficients,
    dual: &DualState,
    cfg: &SystemConfig,
    rule: ScoreRule,
) -> (Vec<bool>, LowerTri<bool>) {
    let (single, pair) = dual_scores(coef, dual, cfg, rule);
    let x = single.iter().map(|&s| s > 0.0).collect();
    let z = pair
        .iter()
        .map(|row| {
            row.iter()
                .map(|&s| match rule {
                    ScoreRule::Stationarity => s > 0.0,
                    ScoreRule::Printed => s < 0.0,
                })
                .collect()
        })
        .collect();
    (x, z)
}

/// Projected subgradient step on the multipliers with step
/// `step0 / sqrt(iter)`, `iter >= 1`.
pub fn subgradient_update(
    dual: &DualState,
    x: &[bool],
    z: &LowerTri<bool>,
    iter: usize,
    rule: ScoreRule,
) -> DualState {
    let beta = dual.step0 / (iter.max(1) as f64).sqrt();
    let b = |v: bool| if v { 1.0 } else { 0.0 };
    let mut next = dual.clone();
    for l in 0..x.len() {
        for m in 0..l {
            let (zl, xl, xm) = (b(z[l][m]), b(x[l]), b(x[m]));
            let (g2, g3) = match rule {
                ScoreRule::Stationarity => (xl - zl, xm - zl),
                ScoreRule::Printed => (zl - xl, zl - xm),
            };
            next.mult1[l][m] = (dual.mult1[l][m] - beta * (zl - xl - xm + 1.0)).max(0.0);
            next.mult2[l][m] = (dual.mult2[l][m] - beta * g2).max(0.0);
            next.mult3[l][m] = (dual.mult3[l][m] - beta * g3).max(0.0);
        }
    }
    next
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DinkelbachOptions {
    /// Stop once `|G(lambda)| < eps`.
    pub eps: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Subgradient base step relative to the largest parametric coefficient.
    pub step0: f64,
    pub rule: ScoreRule,
    /// Hamming radius of the local-search safeguard (1 or 2).
    pub flip_radius: usize,
}

impl Default for DinkelbachOptions {
    fn default() -> Self {
        DinkelbachOptions {
            eps: 1e-6,
            max_outer: 30,
            max_inner: 500,
            step0: 0.01,
            rule: ScoreRule::Stationarity,
            flip_radius: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnOffOutcome {
    pub onoff: Vec<bool>,
    /// `N(x) / D(x)` of the returned vector.
    pub ratio: f64,
    /// Dinkelbach parameters visited, starting with the initial one.
    pub lambdas: Vec<f64>,
    /// Set when the dual loop's best vector was improved by bit-flip search.
    pub local_search_used: bool,
}

/// Best-improvement ascent on `N(x) - lambda D(x)` over all vectors within
/// Hamming distance `radius` (1 or 2) of the current one.
fn bit_flip_ascent(
    coef: &RatioCoefficients,
    x: &mut [bool],
    lambda: f64,
    radius: usize,
    cfg: &SystemConfig,
) -> f64 {
    let n = x.len();
    let mut value = coef.parametric(x, lambda, cfg);
    loop {
        let mut best: Option<((usize, Option<usize>), f64)> = None;
        let mut consider = |x: &mut [bool], flips: (usize, Option<usize>)| {
            let v = coef.parametric(x, lambda, cfg);
            if v > value + 1e-15 * value.abs().max(1.0) && best.is_none_or(|(_, b)| v > b) {
                best = Some((flips, v));
            }
        };
        for k in 0..n {
            x[k] = !x[k];
            consider(x, (k, None));
            if radius >= 2 {
                for m in k + 1..n {
                    x[m] = !x[m];
                    consider(x, (k, Some(m)));
                    x[m] = !x[m];
                }
            }
            x[k] = !x[k];
        }
        match best {
            Some(((k, second), v)) => {
                x[k] = !x[k];
                if let Some(m) = second {
                    x[m] = !x[m];
                }
                value = v;
            }
            None => return value,
        }
    }
}

/// Largest magnitude among the parametric linear and cross coefficients.
fn parametric_scale(coef: &RatioCoefficients, lambda: f64, cfg: &SystemConfig) -> f64 {
    let (inv_u, inv_e) = (1.0 / cfg.noise_user, 1.0 / cfg.noise_eve);
    let mut scale = 0.0f64;
    for l in 0..coef.n_irs() {
        scale = scale.max((inv_u * coef.c_lin[l] - lambda * inv_e * coef.d_lin[l]).abs());
        for m in 0..l {
            scale =
                scale.max((inv_u * coef.c_cross[l][m] - lambda * inv_e * coef.d_cross[l][m]).abs());
        }
    }
    scale
}

/// Inner solver for `G(lambda) = max_x N(x) - lambda D(x)`: dual coordinate
/// rules and subgradient steps, keeping the best binary `x` seen, finished by
/// bit-flip ascent.
fn maximize_parametric(
    coef: &RatioCoefficients,
    lambda: f64,
    incumbent: &[bool],
    cfg: &SystemConfig,
    opts: &DinkelbachOptions,
) -> (Vec<bool>, f64, bool) {
    let n = coef.n_irs();
    let scale = parametric_scale(coef, lambda, cfg);
    let mut best_x = incumbent.to_vec();
    let mut best_val = coef.parametric(&best_x, lambda, cfg);
    let mut visited = BTreeSet::from([best_x.clone()]);
    if scale > 0.0 {
        let mut dual = DualState::new(n, lambda, opts.step0 * scale);
        for iter in 1..=opts.max_inner {
            let (x, z) = dual_coordinate_update(coef, &dual, cfg, opts.rule);
            let val = coef.parametric(&x, lambda, cfg);
            if val > best_val {
                best_val = val;
                best_x = x.clone();
            }
            visited.insert(x.clone());
            let next = subgradient_update(&dual, &x, &z, iter, opts.rule);
            let moved = next.distance(&dual);
            dual = next;
            if moved == 0.0 {
                break;
            }
        }
    }
    // every distinct dual iterate seeds one local search
    let mut polished_best: Option<(Vec<bool>, f64)> = None;
    for start in visited {
        let mut cand = start;
        let val = bit_flip_ascent(coef, &mut cand, lambda, opts.flip_radius, cfg);
        if polished_best.as_ref().is_none_or(|(_, b)| val > *b) {
            polished_best = Some((cand, val));
        }
    }
    match polished_best {
        Some((x, val)) if val > best_val => (x, val, true),
        _ => (best_x, best_val, false),
    }
}

/// Dinkelbach iteration on the activation ratio.
///
/// Starts from the better of `x = 1` and `x = 0`, solves the parametric
/// problem for the current `lambda` and moves `lambda` to the ratio of the
/// maximizer until `|G(lambda)| < eps`.
pub fn dinkelbach_solve(
    coef: &RatioCoefficients,
    cfg: &SystemConfig,
    opts: &DinkelbachOptions,
) -> OnOffOutcome {
    let n = coef.n_irs();
    let all_on = vec![true; n];
    let all_off = vec![false; n];
    let mut x = if coef.ratio(&all_on, cfg) >= 1.0 { all_on } else { all_off };
    let mut lambda = coef.ratio(&x, cfg);
    let mut lambdas = vec![lambda];
    let mut local_search_used = false;

    for _ in 0..opts.max_outer {
        let (cand, g, polished) = maximize_parametric(coef, lambda, &x, cfg, opts);
        local_search_used |= polished;
        if g.abs() < opts.eps || g <= 0.0 {
            break;
        }
        x = cand;
        lambda = coef.ratio(&x, cfg);
        lambdas.push(lambda);
    }
    OnOffOutcome {
        ratio: coef.ratio(&x, cfg),
        onoff: x,
        lambdas,
        local_search_used,
    }
}

/// `(popcount, bits)` ordering used to break ties deterministically.
fn prefer(candidate: &[bool], incumbent: &[bool]) -> bool {
    let ones = |x: &[bool]| x.iter().filter(|&&b| b).count();
    (ones(candidate), candidate) < (ones(incumbent), incumbent)
}

/// Exhaustive maximization of the activation ratio over all `2^L` vectors.
///
/// Walks the vectors in Gray-code order so each step updates both gains in
/// `O(L)`; gains are recomputed from scratch periodically to bound drift.
/// Ties (relative gap below `1e-12`) go to fewer active IRSs, then to the
/// lexicographically smaller vector.
pub fn brute_force_onoff(coef: &RatioCoefficients, cfg: &SystemConfig) -> Result<(Vec<bool>, f64)> {
    let n = coef.n_irs();
    if n > MAX_ENUMERATION_IRS {
        return Err(Error::TooLarge { what: "IRSs", got: n, limit: MAX_ENUMERATION_IRS });
    }
    let mut x = vec![false; n];
    let mut user = 0.0;
    let mut eve = 0.0;
    let mut best_x = x.clone();
    let mut best = 1.0;
    for step in 1u64..(1u64 << n) {
        let k = step.trailing_zeros() as usize;
        let sign = if x[k] { -1.0 } else { 1.0 };
        let mut du = coef.c_lin[k];
        let mut de = coef.d_lin[k];
        for m in (0..n).filter(|&m| m != k && x[m]) {
            du += RatioCoefficients::cross_sym(&coef.c_cross, k, m);
            de += RatioCoefficients::cross_sym(&coef.d_cross, k, m);
        }
        x[k] = !x[k];
        if step % 1024 == 0 {
            user = coef.user_gain(&x);
            eve = coef.eve_gain(&x);
        } else {
            user += sign * du;
            eve += sign * de;
        }
        let ratio = (1.0 + user / cfg.noise_user) / (1.0 + eve / cfg.noise_eve);
        let gap = ratio - best;
        let tied = gap.abs() <= TIE_TOL * best.abs();
        if (gap > 0.0 && !tied) || (tied && prefer(&x, &best_x)) {
            best = ratio;
            best_x = x.clone();
        }
    }
    let ratio = coef.ratio(&best_x, cfg);
    Ok((best_x, ratio))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cfg() -> SystemConfig {
        SystemConfig { noise_user: 1.0, noise_eve: 1.0, ..SystemConfig::default() }
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn single_irs_expansion() {
        let coef = RatioCoefficients::from_amplitudes(&[c(1.0, 2.0)], &[c(0.5, 0.0)]);
        assert_close!(coef.c_lin[0], 5.0, 1e-15);
        assert_close!(coef.d_lin[0], 0.25, 1e-15);
        assert!(coef.c_cross[0].is_empty());
    }

    #[test]
    fn equal_real_amplitudes() {
        let u = 1.5;
        let coef = RatioCoefficients::from_amplitudes(&[c(u, 0.0); 4], &[c(0.0, 0.0); 4]);
        for l in 0..4 {
            assert_close!(coef.c_lin[l], u * u, 1e-15);
            for m in 0..l {
                assert_close!(coef.c_cross[l][m], 2.0 * u * u, 1e-15);
            }
        }
        assert_close!(coef.user_gain(&[true; 4]), 16.0 * u * u, 1e-12);
    }

    #[test]
    fn single_irs_threshold() {
        let cfg = SystemConfig { noise_user: 2.0, noise_eve: 0.5, ..SystemConfig::default() };
        for (cu, de, on) in [(4.0, 0.5, true), (1.0, 0.5, false)] {
            let coef = RatioCoefficients {
                c_lin: vec![cu],
                c_cross: vec![vec![]],
                d_lin: vec![de],
                d_cross: vec![vec![]],
            };
            let dual = DualState::new(1, 1.0, 0.1);
            let (x, _) = dual_coordinate_update(&coef, &dual, &cfg, ScoreRule::Stationarity);
            assert_eq!(x, vec![cu / 2.0 > de / 0.5]);
            let out = dinkelbach_solve(&coef, &cfg, &DinkelbachOptions::default());
            assert_eq!(out.onoff, vec![on]);
            let expected = if on { (1.0 + cu / 2.0) / (1.0 + de / 0.5) } else { 1.0 };
            assert_close!(out.ratio, expected, 1e-15);
            let (bx, br) = brute_force_onoff(&coef, &cfg).unwrap();
            assert_eq!(bx, vec![on]);
            assert_close!(br, expected, 1e-15);
        }
    }

    #[test]
    fn zero_coefficients_switch_everything_off() {
        let cfg = unit_cfg();
        let coef = RatioCoefficients::from_amplitudes(&[c(0.0, 0.0); 5], &[c(0.0, 0.0); 5]);
        let dual = DualState::new(5, 1.0, 0.1);
        let (x, _) = dual_coordinate_update(&coef, &dual, &cfg, ScoreRule::Stationarity);
        assert!(x.iter().all(|&b| !b));
        let out = dinkelbach_solve(&coef, &cfg, &DinkelbachOptions::default());
        assert_eq!(out.ratio, 1.0);
        let (bx, br) = brute_force_onoff(&coef, &cfg).unwrap();
        assert!(bx.iter().all(|&b| !b));
        assert_eq!(br, 1.0);
    }

    #[test]
    fn slack_constraints_keep_multipliers_at_zero() {
        // x = (1, 0), z = 0: every McCormick inequality holds strictly or with
        // a non-negative slack
        let dual = DualState::new(2, 1.0, 0.1);
        let next = subgradient_update(&dual, &[true, false], &vec![vec![], vec![false]], 1, ScoreRule::Stationarity);
        assert_eq!(next.distance(&dual), 0.0);
        let next = subgradient_update(&dual, &[false, false], &vec![vec![], vec![false]], 3, ScoreRule::Stationarity);
        assert_eq!(next.distance(&dual), 0.0);
    }

    #[test]
    fn violated_product_constraint_raises_multiplier() {
        let dual = DualState::new(2, 1.0, 0.2);
        for rule in [ScoreRule::Stationarity, ScoreRule::Printed] {
            let next = subgradient_update(&dual, &[true, true], &vec![vec![], vec![false]], 4, rule);
            assert_close!(next.mult1[1][0], 0.2 / 2.0, 1e-15);
        }
    }

    #[test]
    fn too_many_irs_rejected() {
        let coef = RatioCoefficients::from_amplitudes(&[c(1.0, 0.0); 25], &[c(1.0, 0.0); 25]);
        assert!(matches!(brute_force_onoff(&coef, &unit_cfg()), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn tie_break_prefers_fewer_active() {
        // IRS 1 is useless, IRS 0 helps: (1, 0) and (1, 1) tie in ratio
        let coef = RatioCoefficients::from_amplitudes(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0); 2]);
        let (x, _) = brute_force_onoff(&coef, &unit_cfg()).unwrap();
        assert_eq!(x, vec![true, false]);
    }
}
