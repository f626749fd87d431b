use serde::{Deserialize, Serialize};

use super::interval::{lemma1_intervals, Interval};
use super::outage::kappa;
use super::rho::{rho, rho_terms};
use super::DecoderMode;
use crate::channel::{InfoQuantities, User};
use crate::error::{Error, Result};

/// Infimum of the code rates at which both users' admissibility
/// indicators hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum R0 {
    /// The feasible set is the open interval `(r0, upper)`.
    Feasible { r0: f64, upper: f64 },
    Infeasible,
}

impl R0 {
    pub fn value(&self) -> Option<f64> {
        match self {
            R0::Feasible { r0, .. } => Some(*r0),
            R0::Infeasible => None,
        }
    }
}

/// Feasible set of one user: intersection of its rate intervals and cap.
fn user_feasible_set(info: &InfoQuantities, user: User, lambda: f64, mode: DecoderMode) -> Result<Interval> {
    let (terms, cap) = rho_terms(info, user, mode)?;
    let mut set = Interval::unbounded(1.0);
    for (a, b) in terms {
        set = set.intersect(&lemma1_intervals(a, b, lambda)?.0);
    }
    if let Some(c) = cap {
        set = set.intersect(&Interval::new(1.0, c / lambda));
    }
    Ok(set)
}

/// `r0` by intersecting the per-user rate intervals.
pub fn r0(info: &InfoQuantities, lambda: f64, mode: DecoderMode) -> Result<R0> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let set = user_feasible_set(info, User::One, lambda, mode)?
        .intersect(&user_feasible_set(info, User::Two, lambda, mode)?);
    Ok(if set.is_empty() {
        R0::Infeasible
    } else {
        R0::Feasible {
            r0: set.lo,
            upper: set.hi,
        }
    })
}

fn feasible(info: &InfoQuantities, lambda: f64, mode: DecoderMode, r: f64) -> bool {
    let lim = 1f64.min(r - 1.0);
    User::BOTH.iter().all(|&u| {
        rho(info, u, r, lambda, mode).is_ok_and(|v| v.within_cap(r) && v.rho < lim)
    })
}

/// `r0` by scanning for a feasible rate and bisecting down to the edge of
/// the feasible set. Tolerance `tol` on `r`.
pub fn r0_bisection(info: &InfoQuantities, lambda: f64, mode: DecoderMode, tol: f64) -> Result<Option<f64>> {
    // Every ratio needs lambda r < a, so no feasible r exceeds max a / lambda.
    let mut r_max = 1.0f64;
    for u in User::BOTH {
        let (terms, _) = rho_terms(info, u, mode)?;
        for (a, _) in terms {
            r_max = r_max.max(a / lambda);
        }
    }
    if r_max <= 1.0 {
        return Ok(None);
    }
    const SCAN: usize = 20_000;
    let inside = (1..SCAN)
        .map(|k| 1.0 + (r_max - 1.0) * k as f64 / SCAN as f64)
        .find(|&r| feasible(info, lambda, mode, r));
    let Some(mut hi) = inside else {
        return Ok(None);
    };
    let mut lo = 1.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(info, lambda, mode, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsilonBound {
    /// `lambda` lies below the decoder's zero-outage threshold.
    Zero,
    Bound {
        epsilon: f64,
        r0: f64,
        /// User attaining the maximum of `beta_i(r0)`.
        user: User,
        kappa: f64,
        beta: [f64; 2],
    },
    NotApplicable { reason: String },
}

impl EpsilonBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            EpsilonBound::Zero => Some(0.0),
            EpsilonBound::Bound { epsilon, .. } => Some(*epsilon),
            EpsilonBound::NotApplicable { .. } => None,
        }
    }
}

/// Upper bound on the outage level `epsilon(lambda)` for one decoder.
pub fn epsilon_bound(
    info: &InfoQuantities,
    lambda_bar: f64,
    lambda: f64,
    d_max: f64,
    mode: DecoderMode,
) -> Result<EpsilonBound> {
    if !(lambda > 0.0) || !(d_max > 0.0) {
        return Err(Error::Parameter(format!(
            "lambda and d_max must be positive, got {lambda} and {d_max}"
        )));
    }
    if lambda > lambda_bar {
        return Err(Error::BeyondConverse { lambda, lambda_bar });
    }
    let (tin, di) = info.lambda_thresholds();
    let threshold = match mode {
        DecoderMode::Tin => tin,
        DecoderMode::Di => di,
    };
    if lambda < threshold {
        return Ok(EpsilonBound::Zero);
    }
    let r0 = match r0(info, lambda, mode)? {
        R0::Feasible { r0, .. } => r0,
        R0::Infeasible => {
            return Ok(EpsilonBound::NotApplicable {
                reason: format!("no r > 1 admits both users at lambda = {lambda} ({mode})"),
            })
        }
    };
    let k = kappa(lambda * d_max);
    let rho1 = rho(info, User::One, r0, lambda, mode)?.rho;
    let rho2 = rho(info, User::Two, r0, lambda, mode)?.rho;
    let beta = [rho1 / r0, rho2 / r0];
    let user = if beta[1] > beta[0] { User::Two } else { User::One };
    let epsilon = k * beta[user.index()];
    debug_assert!((epsilon - k / r0 * rho1.max(rho2)).abs() <= 1e-12 * (1.0 + epsilon.abs()));
    Ok(EpsilonBound::Bound {
        epsilon,
        r0,
        user,
        kappa: k,
        beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::GaussianIC;

    fn reference_gaussian() -> (InfoQuantities, f64) {
        let g = GaussianIC::from_dbw(30.0, 30.0, 0.8, 1.5).unwrap();
        (g.info_quantities(), g.lambda_bar())
    }

    #[test]
    fn r0_reference_gaussian_tin() {
        let (info, _) = reference_gaussian();
        let lambda = 1.0;
        let expect = (0..2)
            .map(|i| (info.c_star[i] - 2.0 * info.c[i]) / (info.c_star[i] - info.c[i] - lambda))
            .fold(f64::NEG_INFINITY, f64::max);
        let got = r0(&info, lambda, DecoderMode::Tin).unwrap().value().unwrap();
        assert!((got - expect).abs() < 1e-12);
        assert!((got - 1.1747).abs() < 5e-4);
        let bis = r0_bisection(&info, lambda, DecoderMode::Tin, 1e-12).unwrap().unwrap();
        assert!((bis - got).abs() < 1e-9);
    }

    #[test]
    fn r0_infeasible_past_half_capacity() {
        let (info, _) = reference_gaussian();
        assert_eq!(r0(&info, 2.6, DecoderMode::Tin).unwrap(), R0::Infeasible);
        assert_eq!(r0_bisection(&info, 2.6, DecoderMode::Tin, 1e-12).unwrap(), None);
    }

    #[test]
    fn epsilon_reference_gaussian_tin() {
        let (info, lb) = reference_gaussian();
        let e = epsilon_bound(&info, lb, 1.0, 5.0, DecoderMode::Tin).unwrap();
        let hand = 0.72 * (1.0 - info.c[1]) / (info.c_star[1] - 2.0 * info.c[1]);
        match e {
            EpsilonBound::Bound { epsilon, user, kappa, .. } => {
                assert_eq!(user, User::Two);
                assert!((kappa - 0.72).abs() < 1e-15);
                assert!((epsilon - hand).abs() < 1e-12);
                assert!((epsilon - 0.1071).abs() < 2e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn epsilon_zero_and_converse() {
        let (info, lb) = reference_gaussian();
        assert_eq!(epsilon_bound(&info, lb, 0.2, 5.0, DecoderMode::Tin).unwrap(), EpsilonBound::Zero);
        assert!(matches!(
            epsilon_bound(&info, lb, 6.0, 5.0, DecoderMode::Tin),
            Err(Error::BeyondConverse { .. })
        ));
        assert!(matches!(
            epsilon_bound(&info, lb, 3.0, 5.0, DecoderMode::Di).unwrap(),
            EpsilonBound::NotApplicable { .. }
        ));
    }
}
