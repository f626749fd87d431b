//! Closed-form outage analysis of the block transmission scheme.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod bound;
mod gaussian;
mod interval;
mod outage;
mod rho;

pub use bound::{epsilon_bound, r0, r0_bisection, EpsilonBound, R0};
pub use gaussian::{
    epsilon_gaussian, epsilon_gaussian_di, epsilon_gaussian_tin, LadderCase, LadderOutcome,
};
pub use interval::{admissible_intervals, lemma1_intervals, Interval, Lemma1Case};
pub use outage::{
    avg_rate, delta_cdf, kappa, outage_ub_finite_n, outage_ub_limit, outage_ub_numeric_oracle,
    outage_ub_subunit_rate, OutageBound, OutageCase, OutageInputs, SubunitBound,
};
pub use rho::{rho, rho_terms, RhoValue};

/// How a receiver handles the other user's signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderMode {
    /// Treat interference as noise.
    Tin,
    /// Decode the interfering codeword, then the own one.
    Di,
}

impl DecoderMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DecoderMode::Tin => "tin",
            DecoderMode::Di => "di",
        }
    }
}

impl fmt::Display for DecoderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tin" => Ok(DecoderMode::Tin),
            "di" => Ok(DecoderMode::Di),
            other => Err(Error::Parameter(format!(
                "unknown decoder mode {other:?} (expected tin or di)"
            ))),
        }
    }
}

/// Parameters of the block transmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    /// Bit arrival probability per slot.
    pub lambda: f64,
    /// Normalized code rate `R_c / lambda`.
    pub r: f64,
    /// Codewords per user.
    pub n_packets: usize,
    /// Activation offsets are uniform on `[0, d_max]`.
    pub d_max: f64,
    pub decoder: [DecoderMode; 2],
}

impl SchemeParams {
    pub fn new(lambda: f64, r: f64, n_packets: usize, d_max: f64, mode: DecoderMode) -> Result<Self> {
        let p = Self {
            lambda,
            r,
            n_packets,
            d_max,
            decoder: [mode; 2],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::Parameter(format!(
                "lambda must lie in (0, 1], got {}",
                self.lambda
            )));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::Parameter(format!("r must be positive, got {}", self.r)));
        }
        if self.n_packets == 0 {
            return Err(Error::Parameter("n_packets must be at least 1".into()));
        }
        if !(self.d_max > 0.0 && self.d_max.is_finite()) {
            return Err(Error::Parameter(format!(
                "d_max must be positive, got {}",
                self.d_max
            )));
        }
        Ok(())
    }

    /// Code rate `R_c = r lambda`.
    pub fn code_rate(&self) -> f64 {
        self.r * self.lambda
    }

    /// `alpha = lambda D`.
    pub fn alpha(&self) -> f64 {
        self.lambda * self.d_max
    }
}
