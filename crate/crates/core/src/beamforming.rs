//! Transmit beamforming for fixed phases and on-off status.
//!
//! The beamformer block maximizes
//! `log2((1 + |a^H w|^2 / s2) / (1 + |b^H w|^2 / se2))` subject to
//! `||w||^2 <= P`. [`sca_solve`] follows the lifted route: `W = w w^H` with the
//! rank constraint dropped, auxiliary exponents `p`, `q` and a first-order
//! surrogate of `e^q` around an anchor that is refreshed every iteration.
//! [`gevd_oracle`] is the closed-form optimum used to certify it.
//!
//! Because `A = a a^H` and `B = b b^H` are rank one, only the part of `W`
//! living in `span{a, b}` affects either quadratic form; every solve here works
//! in that two-dimensional subspace and lifts the result back.

use std::f64::consts::{FRAC_PI_2, LOG2_E};

use nalgebra::SymmetricEigen;
use rand::Rng;

use crate::channel_gen::standard_complex_normal;
use crate::error::{Error, Result};
use crate::linalg::{scaled_outer, Herm2, PairBasis};
use crate::model::{mrt_beamformer, pair_objective, CMatrix, CVector, EffectivePair, SystemConfig, C64};

/// Dominant-eigenvalue share of the trace above which a lifted solution is
/// treated as rank one.
pub const RANK_ONE_FRACTION: f64 = 1.0 - 1e-6;

/// One solution of the convexified subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct SdrIterate {
    /// Lifted beamformer `W`, Hermitian PSD with `tr(W) <= P`.
    pub w_mat: CMatrix,
    /// `p` with `e^p <= 1 + tr(WA)/s2`.
    pub p_aux: f64,
    /// `q` satisfying the linearized eavesdropper constraint.
    pub q_aux: f64,
    /// Linearization point of `e^q`.
    pub q_anchor: f64,
}

impl SdrIterate {
    /// Surrogate objective `(p - q) log2(e)` in bits.
    pub fn objective(&self) -> f64 {
        (self.p_aux - self.q_aux) * LOG2_E
    }
}

/// Smallest `q` admitted by the linearized constraint
/// `1 + y <= e^qa + e^qa (q - qa)`, where `y = tr(WB)/se2`.
fn min_q(eve_snr: f64, q_anchor: f64) -> f64 {
    q_anchor - 1.0 + (-q_anchor).exp() * (1.0 + eve_snr)
}

/// Effective channels reduced to the subspace coordinates.
struct Reduced {
    basis: PairBasis,
    /// `alpha alpha^H / s2` in reduced coordinates.
    user: Herm2,
    /// `beta beta^H / se2` in reduced coordinates.
    eve: Herm2,
    user_trace: f64,
    eve_trace: f64,
}

fn pad2(v: Vec<C64>) -> [C64; 2] {
    let zero = C64::new(0.0, 0.0);
    [v.first().copied().unwrap_or(zero), v.get(1).copied().unwrap_or(zero)]
}

impl Reduced {
    fn new(eff: &EffectivePair, cfg: &SystemConfig) -> Self {
        let basis = PairBasis::new(&eff.eff_user, &eff.eff_eve);
        let alpha = pad2(basis.project(&eff.eff_user));
        let beta = pad2(basis.project(&eff.eff_eve));
        let user = Herm2::outer(alpha, 1.0 / cfg.noise_user);
        let eve = Herm2::outer(beta, 1.0 / cfg.noise_eve);
        Reduced {
            basis,
            user_trace: user.p + user.q,
            eve_trace: eve.p + eve.q,
            user,
            eve,
        }
    }

    fn form(m: &Herm2, u: [C64; 2]) -> f64 {
        let mu = m.apply(u);
        (u[0].conj() * mu[0] + u[1].conj() * mu[1]).re.max(0.0)
    }

    /// Unit reduced direction on the lower-right Pareto frontier of the
    /// (user SNR, eavesdropper SNR) region exposed by the weight angle `phi`.
    fn frontier_direction(&self, phi: f64) -> [C64; 2] {
        if self.basis.dim() == 1 {
            return [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        }
        let user = if self.user_trace > 0.0 {
            self.user.scale(phi.cos() / self.user_trace)
        } else {
            self.user
        };
        let eve = if self.eve_trace > 0.0 {
            self.eve.scale(-phi.sin() / self.eve_trace)
        } else {
            self.eve
        };
        user.add(eve).top_eigen().1
    }
}

/// Best surrogate value along the ray `s u u^H`, `0 <= s <= P`.
#[derive(Debug, Clone, Copy)]
struct RayOptimum {
    direction: [C64; 2],
    power: f64,
    p: f64,
    q: f64,
}

impl RayOptimum {
    fn value(&self) -> f64 {
        self.p - self.q
    }
}

fn ray_optimum(red: &Reduced, u: [C64; 2], q_anchor: f64, p_max: f64) -> RayOptimum {
    let x = Reduced::form(&red.user, u);
    let y = Reduced::form(&red.eve, u);
    // d/ds [ln(1 + s x) - e^-qa (1 + s y)] = 0
    let power = if x <= 0.0 {
        0.0
    } else if y <= 0.0 {
        p_max
    } else {
        (q_anchor.exp() / y - 1.0 / x).clamp(0.0, p_max)
    };
    RayOptimum {
        direction: u,
        power,
        p: (power * x).ln_1p(),
        q: min_q(power * y, q_anchor),
    }
}

fn solve_reduced(red: &Reduced, q_anchor: f64, p_max: f64) -> RayOptimum {
    let eval = |phi: f64| ray_optimum(red, red.frontier_direction(phi), q_anchor, p_max);
    if red.basis.dim() == 1 || red.user_trace == 0.0 || red.eve_trace == 0.0 {
        return eval(0.0);
    }

    const GRID: usize = 256;
    let step = FRAC_PI_2 / GRID as f64;
    let mut best_k = 0;
    let mut best = eval(0.0);
    for k in 1..=GRID {
        let cand = eval(k as f64 * step);
        if cand.value() > best.value() {
            best = cand;
            best_k = k;
        }
    }

    // golden-section refinement inside the bracketing cells
    let mut lo = (best_k.saturating_sub(1)) as f64 * step;
    let mut hi = ((best_k + 1).min(GRID)) as f64 * step;
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..80 {
        if f1.value() < f2.value() {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = eval(x1);
        }
    }
    [f1, f2]
        .into_iter()
        .fold(best, |acc, c| if c.value() > acc.value() { c } else { acc })
}

/// Solves the convex subproblem at anchor `q_anchor`:
/// maximize `(p - q) log2 e` over `W >= 0`, `tr W <= P`, with
/// `1 + tr(WA)/s2 >= e^p` and
/// `1 + tr(WB)/se2 <= e^qa + e^qa (q - qa)`.
///
/// The maximizer can always be taken rank one inside `span{a, b}`: the
/// attainable (user, eavesdropper) SNR pairs form a convex region whose
/// relevant boundary consists of scaled pure states. The search runs over
/// that boundary with the power along each ray in closed form.
pub fn sca_subproblem(eff: &EffectivePair, cfg: &SystemConfig, q_anchor: f64) -> Result<SdrIterate> {
    if !q_anchor.is_finite() {
        return Err(Error::NonFinite("linearization anchor"));
    }
    let red = Reduced::new(eff, cfg);
    let best = solve_reduced(&red, q_anchor, cfg.power_budget);
    let u = red.basis.lift(&best.direction);
    Ok(SdrIterate {
        w_mat: scaled_outer(&u, best.power),
        p_aux: best.p,
        q_aux: best.q,
        q_anchor,
    })
}

/// How the first beamformer of [`sca_solve`] is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaInit {
    /// Matched filter to the user channel at full power.
    #[default]
    Mrt,
    /// Random complex Gaussian direction at full power.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaOptions {
    pub max_iter: usize,
    /// Stop once the surrogate objective changes by less than this (bits).
    pub tol: f64,
    pub init: ScaInit,
    /// Candidates drawn when the final lift is not rank one.
    pub randomization_samples: usize,
}

impl Default for ScaOptions {
    fn default() -> Self {
        ScaOptions {
            max_iter: 50,
            tol: 1e-6,
            init: ScaInit::Mrt,
            randomization_samples: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScaOutcome {
    pub beamformer: CVector,
    /// Surrogate objective `(p - q) log2 e` after every subproblem.
    pub trace: Vec<f64>,
    pub converged: bool,
    /// Whether the last lifted iterate passed the rank-one test.
    pub rank_one: bool,
}

fn random_full_power<R: Rng + ?Sized>(n: usize, power: f64, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_iterator(n, (0..n).map(|_| standard_complex_normal(rng)));
        let norm = v.norm();
        if norm > 0.0 {
            return v * C64::from(power.sqrt() / norm);
        }
    }
}

/// Successive convex approximation over the lifted beamformer.
///
/// Starts from `w0`, sets the anchor to `q0 = ln(1 + |b^H w0|^2 / se2)` and
/// then repeatedly solves [`sca_subproblem`], moving the anchor to the `q` it
/// returns. The final lift is turned back into a vector with
/// [`gaussian_randomization`].
pub fn sca_solve<R: Rng + ?Sized>(
    eff: &EffectivePair,
    cfg: &SystemConfig,
    opts: &ScaOptions,
    rng: &mut R,
) -> ScaOutcome {
    let n = eff.n_tx();
    if eff.eff_user.norm() == 0.0 {
        return ScaOutcome {
            beamformer: CVector::zeros(n),
            trace: Vec::new(),
            converged: true,
            rank_one: true,
        };
    }
    let w0 = match opts.init {
        ScaInit::Mrt => mrt_beamformer(&eff.eff_user, cfg.power_budget),
        ScaInit::Random => random_full_power(n, cfg.power_budget, rng),
    };
    let mut anchor = (eff.eff_eve.dotc(&w0).norm_sqr() / cfg.noise_eve).ln_1p();

    let red = Reduced::new(eff, cfg);
    let mut trace = Vec::with_capacity(opts.max_iter);
    let mut converged = false;
    let mut last: Option<RayOptimum> = None;
    for _ in 0..opts.max_iter.max(1) {
        let it = solve_reduced(&red, anchor, cfg.power_budget);
        let obj = it.value() * LOG2_E;
        let done = trace.last().is_some_and(|prev: &f64| (obj - prev).abs() < opts.tol);
        trace.push(obj);
        anchor = it.q;
        last = Some(it);
        if done {
            converged = true;
            break;
        }
    }

    let last = last.expect("at least one iteration");
    let u = red.basis.lift(&last.direction);
    let w_mat = scaled_outer(&u, last.power);
    let rank_one = dominant_fraction(&w_mat).is_none_or(|f| f >= RANK_ONE_FRACTION);
    let beamformer = gaussian_randomization(&w_mat, eff, cfg, opts.randomization_samples, rng);
    ScaOutcome { beamformer, trace, converged, rank_one }
}

fn dominant_fraction(w_mat: &CMatrix) -> Option<f64> {
    let eig = SymmetricEigen::new(w_mat.clone());
    let trace: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    if trace <= 0.0 {
        return None;
    }
    Some(eig.eigenvalues.max() / trace)
}

/// Closed-form optimum of the beamforming block.
///
/// The ratio `(1 + P|a^H u|^2/s2) / (1 + P|b^H u|^2/se2)` over unit `u` is a
/// generalized Rayleigh quotient of `(I + (P/s2) a a^H, I + (P/se2) b b^H)`;
/// its principal generalized eigenvector, computed in `span{a, b}`, gives the
/// beamformer `sqrt(P) u / ||u||`. Returns the zero beamformer with rate 0 when
/// no direction beats silence.
pub fn gevd_oracle(eff: &EffectivePair, cfg: &SystemConfig) -> (CVector, f64) {
    let n = eff.n_tx();
    let zero = || (CVector::zeros(n), 0.0);
    if eff.eff_user.norm() == 0.0 {
        return zero();
    }
    let basis = PairBasis::new(&eff.eff_user, &eff.eff_eve);
    let alpha = pad2(basis.project(&eff.eff_user));
    let beta = pad2(basis.project(&eff.eff_eve));
    let p = cfg.power_budget;

    let direction = if basis.dim() == 1 {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    } else {
        let numer = Herm2::identity().add(Herm2::outer(alpha, p / cfg.noise_user));
        // (I + c b b^H)^(-1/2) = I + ((1 + c|b|^2)^(-1/2) - 1) b b^H / |b|^2
        let beta_sq = beta[0].norm_sqr() + beta[1].norm_sqr();
        let whiten = if beta_sq > 0.0 {
            let c = p / cfg.noise_eve;
            let k = ((1.0 + c * beta_sq).sqrt().recip() - 1.0) / beta_sq;
            Herm2::identity().add(Herm2::outer(beta, k))
        } else {
            Herm2::identity()
        };
        let e0 = whiten.apply(numer.apply(whiten.apply([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])));
        let e1 = whiten.apply(numer.apply(whiten.apply([C64::new(0.0, 0.0), C64::new(1.0, 0.0)])));
        let sandwich = Herm2 { p: e0[0].re, q: e1[1].re, r: e1[0] };
        let (_, v) = sandwich.top_eigen();
        whiten.apply(v)
    };

    let u = basis.lift(&direction);
    let norm = u.norm();
    if norm == 0.0 {
        return zero();
    }
    let w = u * C64::from(p.sqrt() / norm);
    let rate = pair_objective(eff, &w, cfg);
    if rate > 0.0 {
        (w, rate)
    } else {
        zero()
    }
}

/// Draws `samples` candidates `xi ~ CN(0, W)`, each rescaled to full power,
/// paired with its unclamped secrecy objective.
pub fn randomization_batch<R: Rng + ?Sized>(
    w_mat: &CMatrix,
    eff: &EffectivePair,
    cfg: &SystemConfig,
    samples: usize,
    rng: &mut R,
) -> Vec<(CVector, f64)> {
    let n = w_mat.nrows();
    let eig = SymmetricEigen::new(w_mat.clone());
    let mut factor = eig.eigenvectors.clone();
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        let s = C64::from(lambda.max(0.0).sqrt());
        for row in 0..n {
            factor[(row, k)] *= s;
        }
    }
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let r = CVector::from_iterator(n, (0..n).map(|_| standard_complex_normal(rng)));
        let xi = &factor * r;
        let norm = xi.norm();
        if norm == 0.0 {
            continue;
        }
        let w = xi * C64::from(cfg.power_budget.sqrt() / norm);
        let obj = pair_objective(eff, &w, cfg);
        out.push((w, obj));
    }
    out
}

/// Recovers a beamformer from a lifted solution: the scaled principal
/// eigenvector when `W` is numerically rank one, otherwise the best of a
/// Gaussian randomization batch.
pub fn gaussian_randomization<R: Rng + ?Sized>(
    w_mat: &CMatrix,
    eff: &EffectivePair,
    cfg: &SystemConfig,
    samples: usize,
    rng: &mut R,
) -> CVector {
    let n = w_mat.nrows();
    let eig = SymmetricEigen::new(w_mat.clone());
    let trace: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    if trace <= 0.0 {
        return CVector::zeros(n);
    }
    let top = eig.eigenvalues.imax();
    let lambda = eig.eigenvalues[top];
    if lambda >= RANK_ONE_FRACTION * trace {
        let v = eig.eigenvectors.column(top).into_owned();
        let scale = lambda.min(cfg.power_budget).sqrt();
        return v * C64::from(scale);
    }
    randomization_batch(w_mat, eff, cfg, samples, rng)
        .into_iter()
        .fold(None::<(CVector, f64)>, |best, (w, obj)| match best {
            Some((_, b)) if b >= obj => best,
            _ => Some((w, obj)),
        })
        .map_or_else(|| CVector::zeros(n), |(w, _)| w)
}
