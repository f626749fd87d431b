use serde::{Deserialize, Serialize};

use super::interval::admissible_intervals;
use super::rho::{rho, RhoValue};
use super::{DecoderMode, SchemeParams};
use crate::channel::{InfoQuantities, User};
use crate::error::{Error, Result};

/// Slack allowed before a probability is flagged as out of `[0, 1]`.
const RANGE_TOL: f64 = 1e-12;

/// Asynchrony-window factor: `(2/alpha)(2 - 1/alpha)` for `alpha >= 1`, else 2.
pub fn kappa(alpha: f64) -> f64 {
    if alpha >= 1.0 {
        (2.0 / alpha) * (2.0 - 1.0 / alpha)
    } else {
        2.0
    }
}

/// CDF of `|d2 - d1|` for independent `d_i ~ U[0, D]`.
pub fn delta_cdf(delta: f64, d_max: f64) -> f64 {
    if delta < 0.0 {
        0.0
    } else if delta < d_max {
        let u = delta / d_max;
        u * (2.0 - u)
    } else {
        1.0
    }
}

/// Long-run rate `R(N, r)` of the block transmission scheme.
pub fn avg_rate(n_packets: usize, r: f64, lambda: f64) -> f64 {
    let n = n_packets as f64;
    if r > 1.0 {
        n * r / (n * r + 1.0) * lambda
    } else {
        n * r / (n + r) * lambda
    }
}

/// Scalars feeding the finite-`N` and limiting outage bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageInputs {
    pub alpha: f64,
    pub r: f64,
    pub rho: [f64; 2],
    pub beta: [f64; 2],
    pub kappa: f64,
    pub chi1: [bool; 2],
    pub chi2: [bool; 2],
}

impl OutageInputs {
    pub fn new(alpha: f64, r: f64, rho: [f64; 2]) -> Result<Self> {
        Self::from_rho_values(alpha, r, rho.map(|rho| RhoValue { rho, r_cap: None }))
    }

    /// Like [`OutageInputs::new`], but a violated rate cap clears both
    /// indicators for that user.
    pub fn from_rho_values(alpha: f64, r: f64, rho: [RhoValue; 2]) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Parameter(format!("alpha must be positive, got {alpha}")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Parameter(format!("r must be positive, got {r}")));
        }
        let lim = 1f64.min(r - 1.0);
        let chi1 = rho.map(|v| v.within_cap(r) && v.rho < lim);
        let chi2 = rho.map(|v| v.within_cap(r) && v.rho < 1.0);
        let out = Self {
            alpha,
            r,
            rho: rho.map(|v| v.rho),
            beta: rho.map(|v| v.rho / r),
            kappa: kappa(alpha),
            chi1,
            chi2,
        };
        for i in 0..2 {
            if out.chi1[i] && !(out.beta[i] < 0.5) {
                return Err(Error::Parameter(format!(
                    "user {}: chi1 set but beta = {} is not below 1/2",
                    i + 1,
                    out.beta[i]
                )));
            }
        }
        Ok(out)
    }

    /// Evaluates `rho_i(r)` on a channel for the scheme's decoders.
    pub fn from_scheme(info: &InfoQuantities, params: &SchemeParams) -> Result<Self> {
        params.validate()?;
        let v = [User::One, User::Two].map(|u| rho(info, u, params.r, params.lambda, params.decoder[u.index()]));
        let [a, b] = v;
        Self::from_rho_values(params.alpha(), params.r, [a?, b?])
    }

    /// Same as [`OutageInputs::from_scheme`] with one decoder for both users.
    pub fn evaluate(info: &InfoQuantities, lambda: f64, r: f64, d_max: f64, mode: DecoderMode) -> Result<Self> {
        let v1 = rho(info, User::One, r, lambda, mode)?;
        let v2 = rho(info, User::Two, r, lambda, mode)?;
        Self::from_rho_values(lambda * d_max, r, [v1, v2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutageCase {
    /// The window ends after the last admissible interval it reaches.
    Whole,
    /// The window ends inside admissible interval `m`.
    Partial,
    /// The window reaches the unbounded interval `A_N`.
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageBound {
    /// Unclamped value of the bound.
    pub value: f64,
    pub case: OutageCase,
    pub m: i64,
    /// The value fell outside `[0, 1]` by more than rounding.
    pub out_of_range: bool,
    /// `rho_i` was exactly zero.
    pub rho_zero: bool,
}

/// Finite-`N` outage bound for `user`.
pub fn outage_ub_finite_n(inputs: &OutageInputs, n_packets: usize, user: User) -> Result<OutageBound> {
    let i = user.index();
    let rho = inputs.rho[i];
    if rho < 0.0 {
        return Err(Error::NegativeRho(rho));
    }
    if n_packets == 0 {
        return Err(Error::Parameter("n_packets must be at least 1".into()));
    }
    let beta = inputs.beta[i];
    let n = n_packets as f64;
    let x = n * inputs.alpha;
    let chi1 = if inputs.chi1[i] { 1.0 } else { 0.0 };
    let chi2 = if inputs.chi2[i] { 1.0 } else { 0.0 };
    let m = ((x - beta).ceil() as i64).max(0);
    let whole = |k: f64| (1.0 - 2.0 * beta) * (2.0 - k / x) * (k / x);
    let tail = |k: f64| {
        let t = 1.0 - (k + beta) / x;
        t * t
    };

    let (value, case) = if m >= n_packets as i64 {
        (1.0 - whole(n - 1.0) * chi1 - tail(n - 1.0) * chi2, OutageCase::Tail)
    } else if m == 0 || (m as f64) <= x + beta {
        (1.0 - whole(m as f64) * chi1, OutageCase::Whole)
    } else {
        let k = (m - 1) as f64;
        (1.0 - (whole(k) + tail(k)) * chi1, OutageCase::Partial)
    };
    Ok(OutageBound {
        value,
        case,
        m,
        out_of_range: !(-RANGE_TOL..=1.0 + RANGE_TOL).contains(&value),
        rho_zero: rho == 0.0,
    })
}

/// The same bound summed interval by interval over `theta_N A_j`.
pub fn outage_ub_numeric_oracle(
    r: f64,
    rho: f64,
    n_packets: usize,
    lambda: f64,
    d_max: f64,
    chi1: bool,
    chi2: bool,
) -> Result<f64> {
    let intervals = admissible_intervals(r, rho, n_packets)?;
    let theta = 1.0 / (n_packets as f64 * r * lambda);
    let (last, bounded) = intervals.split_last().expect("at least one interval");
    let inner: f64 = bounded
        .iter()
        .filter(|iv| !iv.is_empty())
        .map(|iv| delta_cdf(theta * iv.hi, d_max) - delta_cdf(theta * iv.lo, d_max))
        .sum();
    let outer = 1.0 - delta_cdf(theta * last.lo, d_max);
    let ind = |b: bool| if b { 1.0 } else { 0.0 };
    Ok(1.0 - inner * ind(chi1) - outer * ind(chi2))
}

/// `N -> inf` limit of the finite-`N` bound.
pub fn outage_ub_limit(inputs: &OutageInputs, user: User) -> f64 {
    let i = user.index();
    let a = inputs.alpha;
    let beta = inputs.beta[i];
    let chi1 = if inputs.chi1[i] { 1.0 } else { 0.0 };
    let chi2 = if inputs.chi2[i] { 1.0 } else { 0.0 };
    if a >= 1.0 {
        let t = 1.0 - 1.0 / a;
        1.0 - (1.0 / a) * (2.0 - 1.0 / a) * (1.0 - 2.0 * beta) * chi1 - t * t * chi2
    } else {
        1.0 - (1.0 - 2.0 * beta) * chi1
    }
}

/// Outage bound for the gap-free regime `0 < r < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubunitBound {
    pub rho: f64,
    /// Bound at the given `N`.
    pub finite: f64,
    /// `N -> inf` at the given `r`.
    pub limit_n: f64,
    /// `N -> inf`, then `r -> 1-`.
    pub limit_r1: f64,
}

pub fn outage_ub_subunit_rate(
    info: &InfoQuantities,
    user: User,
    lambda: f64,
    r: f64,
    n_packets: usize,
    d_max: f64,
) -> Result<SubunitBound> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Parameter(format!("need 0 < r < 1, got {r}")));
    }
    if n_packets == 0 {
        return Err(Error::Parameter("n_packets must be at least 1".into()));
    }
    let rho = rho(info, user, r, lambda, DecoderMode::Tin)?.rho;
    let n = n_packets as f64;
    let theta = 1.0 / (n * r * lambda);
    let ind = |b: bool| if b { 1.0 } else { 0.0 };
    let finite = 1.0
        - (1.0 - delta_cdf((n - 1.0 + rho) * theta, d_max)) * ind(rho < 1.0)
        - delta_cdf((n - 1.0) * theta, d_max) * ind(rho < 0.0);
    let limit_n = if rho < 0.0 {
        0.0
    } else if rho < 1.0 {
        delta_cdf(1.0 / (r * lambda), d_max)
    } else {
        1.0
    };
    let i = user.index();
    let limit_r1 = if lambda <= info.c[i] {
        0.0
    } else if lambda <= info.c_star[i] {
        delta_cdf(1.0 / lambda, d_max)
    } else {
        1.0
    };
    Ok(SubunitBound {
        rho,
        finite,
        limit_n,
        limit_r1,
    })
}
