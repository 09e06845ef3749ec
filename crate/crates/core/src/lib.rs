//! Physical-layer secrecy optimization for an mmWave downlink assisted by
//! several intelligent reflecting surfaces (IRSs).
//!
//! The problem is split into three blocks that are optimized alternately:
//!
//! * [`beamforming`]: transmit beamformer via successive convex approximation
//!   over a semidefinite lift, with a closed-form generalized-eigenvector
//!   certificate.
//! * [`onoff`]: binary IRS activation via Dinkelbach's parametric method and a
//!   Lagrange-dual inner loop, certified by exhaustive enumeration.
//! * [`phases`]: unit-modulus reflection coefficients via Riemannian gradient
//!   ascent on a product of circles.
//!
//! [`ao`] drives the cycle, [`channel_gen`] synthesizes geometric channels and
//! [`harness`] runs the Monte Carlo experiments behind the `irs-sim` binary.

#[cfg(test)]
#[macro_use]
mod test_util;

pub mod ao;
pub mod beamforming;
pub mod channel_gen;
pub mod error;
pub mod harness;
mod linalg;
pub mod model;
pub mod onoff;
pub mod phases;

pub use error::{Error, Result};
pub use model::{
    achievable_rate, dbm_to_watt, effective_channels, secrecy_objective, secrecy_rate, CMatrix,
    CVector, ChannelSet, EffectivePair, SolutionState, SystemConfig, C64,
};
