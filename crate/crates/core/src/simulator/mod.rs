//! Monte Carlo engine for the block transmission scheme.
//!
//! Each trial draws two activation offsets, places both users' codewords on
//! the time axis (normalized so a codeword has unit length), measures how
//! much of each codeword is received under interference, and applies the
//! capacity-threshold decoding test. A trial is an outage for a user when
//! any of its codewords fails at its receiver.
//!
//! Trial `k` uses a ChaCha8 stream seeded by `(seed, k)`, so results do not
//! depend on how trials are split across threads.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{admissible_intervals, OutageInputs, SchemeParams};
use crate::channel::{InfoQuantities, User};
use crate::error::{Error, Result};

mod arrivals;
mod geometry;

pub use arrivals::{
    codeword_len, sample_offsets, sample_xi, simulate_tau, tau_bar, tau_from_xi, ArrivalTrace,
};
pub use geometry::{
    codeword_failures, decode_success, interferer_decodable, overlap_fractions, overlap_with, Schedule,
};

/// Trials per parallel work item. Fixed so that floating-point sums are
/// reduced in the same order on any machine.
const CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Codewords at their limiting positions `tau_bar_j`.
    Fluid,
    /// Finite `n` with simulated Bernoulli arrivals.
    Stochastic,
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimMode::Fluid => "fluid",
            SimMode::Stochastic => "stochastic",
        })
    }
}

impl FromStr for SimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fluid" => Ok(SimMode::Fluid),
            "stochastic" => Ok(SimMode::Stochastic),
            other => Err(Error::Parameter(format!(
                "unknown simulation mode {other:?} (expected fluid or stochastic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scheme: SchemeParams,
    /// Bits per source; required in stochastic mode.
    pub n: Option<u64>,
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.mode == SimMode::Stochastic {
            let n = self
                .n
                .ok_or_else(|| Error::Parameter("stochastic mode needs n".into()))?;
            arrivals::packet_targets(n, self.scheme.n_packets)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Empirical outage frequency per user.
    pub outage: [f64; 2],
    /// 95% binomial half-width `1.96 sqrt(p (1 - p) / trials)`.
    pub halfwidth: [f64; 2],
    /// Mean transmission rate `n / (tau_N + n theta_N)` per user.
    pub rates: [f64; 2],
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
    pub outages: [u64; 2],
    /// `failures[i][j]`: trials in which codeword `j` of user `i` failed.
    pub failures: [Vec<u64>; 2],
    /// Fluid trials whose outcome disagreed with admissible-interval
    /// membership. `None` when the check does not apply.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval_disagreements: Option<[u64; 2]>,
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub offsets: [f64; 2],
    pub schedules: [Schedule; 2],
    pub failed: [Vec<bool>; 2],
    pub rates: [f64; 2],
}

impl TrialOutcome {
    pub fn outage(&self, user: User) -> bool {
        self.failed[user.index()].iter().any(|&f| f)
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs trial number `trial` of `config`.
pub fn run_trial(config: &SimConfig, info: &InfoQuantities, trial: u64) -> Result<TrialOutcome> {
    let s = &config.scheme;
    let mut rng = trial_rng(config.seed, trial);
    let offsets = sample_offsets(s.d_max, &mut rng);
    let n_packets = s.n_packets;
    let (schedules, rates) = match config.mode {
        SimMode::Fluid => {
            // Offsets in codeword lengths: d_i / theta_N = d_i N r lambda.
            let scale = n_packets as f64 * s.r * s.lambda;
            let sched = offsets.map(|d| Schedule::fluid(d * scale, n_packets, s.r));
            let rate = scale / (tau_bar(n_packets, s.r) + 1.0);
            (sched, [rate; 2])
        }
        SimMode::Stochastic => {
            let n = config
                .n
                .ok_or_else(|| Error::Parameter("stochastic mode needs n".into()))?;
            let len = codeword_len(n, n_packets, s.r, s.lambda);
            let t1 = simulate_tau(s.lambda, n, n_packets, s.r, &mut rng)?;
            let t2 = simulate_tau(s.lambda, n, n_packets, s.r, &mut rng)?;
            let rate = |t: &[f64]| n as f64 / (t[n_packets - 1] + len);
            let rates = [rate(&t1), rate(&t2)];
            let place = |d: f64, t: Vec<f64>| {
                Schedule::new(t.into_iter().map(|x| (n as f64 * d + x) / len).collect())
            };
            ([place(offsets[0], t1), place(offsets[1], t2)], rates)
        }
    };
    let r_code = s.code_rate();
    let failed = User::BOTH.map(|u| {
        let i = u.index();
        codeword_failures(&schedules[i], &schedules[1 - i], info, u, r_code, s.decoder[i])
    });
    Ok(TrialOutcome {
        offsets,
        schedules,
        failed,
        rates,
    })
}

/// Success predicted by admissible-interval membership of the normalized
/// asynchrony `delta' = |d_2 - d_1| N r lambda`.
pub fn interval_success(inputs: &OutageInputs, scheme: &SchemeParams, delta_prime: f64, user: User) -> Result<bool> {
    let i = user.index();
    let a = admissible_intervals(scheme.r, inputs.rho[i], scheme.n_packets)?;
    let (last, bounded) = a.split_last().expect("at least one interval");
    Ok(inputs.chi1[i] && bounded.iter().any(|iv| iv.contains(delta_prime))
        || inputs.chi2[i] && last.contains(delta_prime))
}

#[derive(Clone)]
struct Tally {
    outages: [u64; 2],
    rate_sum: [f64; 2],
    failures: [Vec<u64>; 2],
    disagreements: [u64; 2],
}

impl Tally {
    fn new(n_packets: usize) -> Self {
        Self {
            outages: [0; 2],
            rate_sum: [0.0; 2],
            failures: [vec![0; n_packets], vec![0; n_packets]],
            disagreements: [0; 2],
        }
    }

    fn merge(&mut self, other: &Tally) {
        for i in 0..2 {
            self.outages[i] += other.outages[i];
            self.rate_sum[i] += other.rate_sum[i];
            self.disagreements[i] += other.disagreements[i];
            for (a, b) in self.failures[i].iter_mut().zip(&other.failures[i]) {
                *a += b;
            }
        }
    }
}

/// Runs all trials, in parallel, with bit-identical results for a given
/// seed and configuration.
pub fn run_trials(config: &SimConfig, info: &InfoQuantities) -> Result<SimResult> {
    config.validate()?;
    let s = config.scheme;
    // The interval check needs r > 1 and well-defined rho for both users.
    let check = match config.mode {
        SimMode::Fluid if s.r > 1.0 => OutageInputs::from_scheme(info, &s).ok(),
        _ => None,
    };
    let scale = s.n_packets as f64 * s.r * s.lambda;

    let chunks = config.trials.div_ceil(CHUNK);
    let tallies: Vec<Result<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut t = Tally::new(s.n_packets);
            for k in c * CHUNK..((c + 1) * CHUNK).min(config.trials) {
                let out = run_trial(config, info, k)?;
                for u in User::BOTH {
                    let i = u.index();
                    let outage = out.outage(u);
                    t.outages[i] += outage as u64;
                    t.rate_sum[i] += out.rates[i];
                    for (f, &bad) in t.failures[i].iter_mut().zip(&out.failed[i]) {
                        *f += bad as u64;
                    }
                    if let Some(inp) = &check {
                        let dp = (out.offsets[1] - out.offsets[0]).abs() * scale;
                        if interval_success(inp, &s, dp, u)? == outage {
                            t.disagreements[i] += 1;
                        }
                    }
                }
            }
            Ok(t)
        })
        .collect();

    let mut total = Tally::new(s.n_packets);
    for t in tallies {
        total.merge(&t?);
    }
    let trials = config.trials as f64;
    let outage = total.outages.map(|o| o as f64 / trials);
    Ok(SimResult {
        outage,
        halfwidth: outage.map(|p| 1.96 * (p * (1.0 - p) / trials).sqrt()),
        rates: total.rate_sum.map(|r| r / trials),
        trials: config.trials,
        seed: config.seed,
        mode: config.mode,
        outages: total.outages,
        failures: total.failures,
        interval_disagreements: check.map(|_| total.disagreements),
    })
}
