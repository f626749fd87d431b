//! Achievable outage levels for two-user memoryless interference channels
//! whose transmitters receive their data gradually, one Bernoulli bit per
//! slot, and start at independent uniformly random times.
//!
//! The crate is split three ways:
//!
//! - [`channel`]: discrete and Gaussian interference channels and the
//!   mutual-information constants every bound is built from.
//! - [`analysis`]: closed-form outage bounds for the block transmission
//!   scheme (admissible asynchrony intervals, finite-`N` and limiting outage,
//!   `r0`, the `epsilon(lambda)` bounds and their Gaussian case ladders).
//! - [`simulator`]: a seeded Monte Carlo engine that places codewords on the
//!   time axis, measures interference overlap, and applies the
//!   capacity-threshold decoding test.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod config;
mod error;
pub mod simulator;

pub use analysis::{
    DecoderMode, EpsilonBound, Interval, OutageBound, OutageInputs, SchemeParams,
};
pub use channel::{DiscreteIC, GaussianIC, InfoQuantities, InputDistribution, User};
pub use config::ChannelConfig;
pub use error::{Error, Result};
pub use simulator::{SimConfig, SimMode, SimResult};
