//! Case ladders for the Gaussian channel, where both decoders reduce to
//! one rate-interval instance per user and `r0` has a closed form.

use serde::{Deserialize, Serialize};

use super::outage::kappa;
use super::DecoderMode;
use crate::channel::{GaussianIC, User};
use crate::error::{Error, Result};

/// Which configuration of the two users' interval cases applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderCase {
    /// User 1 below both of its thresholds, user 2 in the middle band.
    A,
    /// User 1 with the narrow band `a/2 <= lambda < b`, user 2 in the middle band.
    B,
    /// Case A with the users swapped.
    C,
    /// Case B with the users swapped.
    D,
    /// Both users in the middle band.
    E,
}

impl LadderCase {
    pub fn label(self) -> char {
        match self {
            LadderCase::A => 'a',
            LadderCase::B => 'b',
            LadderCase::C => 'c',
            LadderCase::D => 'd',
            LadderCase::E => 'e',
        }
    }

    /// Matching condition set (1 to 3) of the closed-form statement.
    pub fn group(self) -> u8 {
        match self {
            LadderCase::A | LadderCase::C => 1,
            LadderCase::B | LadderCase::D => 2,
            LadderCase::E => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LadderOutcome {
    Case {
        epsilon: f64,
        user: User,
        case: LadderCase,
        r0: f64,
    },
    NotApplicable { reason: String },
}

impl LadderOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LadderOutcome::Case { epsilon, .. } => Some(*epsilon),
            LadderOutcome::NotApplicable { .. } => None,
        }
    }

    /// Short label such as `prop1/a`, or `n/a`.
    pub fn label(&self) -> String {
        match self {
            LadderOutcome::Case { case, user, .. } => {
                format!("case{}{}/i={}", case.group(), case.label(), user.number())
            }
            LadderOutcome::NotApplicable { .. } => "n/a".into(),
        }
    }
}

#[derive(Clone, Copy)]
enum Band {
    Below,
    Narrow,
    Middle,
    Above,
}

fn band(a: f64, b: f64, lambda: f64) -> Band {
    let half = a / 2.0;
    if lambda < b.min(half) {
        Band::Below
    } else if half <= lambda && lambda < b {
        Band::Narrow
    } else if b <= lambda && lambda < half {
        Band::Middle
    } else {
        Band::Above
    }
}

/// Runs the ladder on per-user pairs `(a_i, b_i)`. `cap` bounds `r` from
/// above for both users (`+inf` when absent).
fn ladder(pairs: [(f64, f64); 2], caps: [f64; 2], lambda: f64, d_max: f64) -> LadderOutcome {
    let t = pairs.map(|(a, b)| (a - 2.0 * b) / (a - b - lambda));
    let bands = pairs.map(|(a, b)| band(a, b, lambda));
    let cap = caps[0].min(caps[1]);
    let pick = |i: usize, case: LadderCase, ok: bool| {
        if !ok {
            return LadderOutcome::NotApplicable {
                reason: format!("case {} has an empty feasible set at lambda = {lambda}", case.label()),
            };
        }
        let (a, b) = pairs[i];
        LadderOutcome::Case {
            epsilon: kappa(lambda * d_max) * (lambda - b) / (a - 2.0 * b),
            user: if i == 0 { User::One } else { User::Two },
            case,
            r0: t[i],
        }
    };
    match bands {
        [Band::Below, Band::Middle] => pick(1, LadderCase::A, t[1] < cap),
        [Band::Narrow, Band::Middle] => pick(1, LadderCase::B, t[1] < t[0].min(cap)),
        [Band::Middle, Band::Below] => pick(0, LadderCase::C, t[0] < cap),
        [Band::Middle, Band::Narrow] => pick(0, LadderCase::D, t[0] < t[1].min(cap)),
        [Band::Middle, Band::Middle] => {
            let i = if t[1] > t[0] { 1 } else { 0 };
            pick(i, LadderCase::E, t[i] < cap)
        }
        _ => LadderOutcome::NotApplicable {
            reason: format!("lambda = {lambda} is outside the ladder domain"),
        },
    }
}

fn check_lambda(channel: &GaussianIC, lambda: f64, d_max: f64) -> Result<()> {
    channel.validate()?;
    if !(lambda > 0.0) || !(d_max > 0.0) {
        return Err(Error::Parameter(format!(
            "lambda and d_max must be positive, got {lambda} and {d_max}"
        )));
    }
    let lambda_bar = channel.lambda_bar();
    if lambda > lambda_bar {
        return Err(Error::BeyondConverse { lambda, lambda_bar });
    }
    Ok(())
}

/// `epsilon(lambda)` bound for receivers that treat interference as noise.
pub fn epsilon_gaussian_tin(channel: &GaussianIC, lambda: f64, d_max: f64) -> Result<LadderOutcome> {
    check_lambda(channel, lambda, d_max)?;
    let info = channel.info_quantities();
    let pairs = [0, 1].map(|i| (info.c_star[i], info.c[i]));
    Ok(ladder(pairs, [f64::INFINITY; 2], lambda, d_max))
}

/// `epsilon(lambda)` bound for receivers that decode interference.
pub fn epsilon_gaussian_di(channel: &GaussianIC, lambda: f64, d_max: f64) -> Result<LadderOutcome> {
    check_lambda(channel, lambda, d_max)?;
    let info = channel.info_quantities();
    let pairs = [0, 1].map(|i| (info.c_tilde_star[i], info.c_tilde[i]));
    if pairs.iter().any(|(a, b)| !(a > b)) {
        return Ok(LadderOutcome::NotApplicable {
            reason: "no cross link: interference cannot be decoded".into(),
        });
    }
    let caps = info.c_star.map(|c| c / lambda);
    Ok(ladder(pairs, caps, lambda, d_max))
}

/// Runs the ladder for `mode`.
pub fn epsilon_gaussian(channel: &GaussianIC, lambda: f64, d_max: f64, mode: DecoderMode) -> Result<LadderOutcome> {
    match mode {
        DecoderMode::Tin => epsilon_gaussian_tin(channel, lambda, d_max),
        DecoderMode::Di => epsilon_gaussian_di(channel, lambda, d_max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{epsilon_bound, EpsilonBound};
    use proptest::prelude::*;

    fn reference_gaussian() -> GaussianIC {
        GaussianIC::from_dbw(30.0, 30.0, 0.8, 1.5).unwrap()
    }

    #[test]
    fn tin_lambda_one_is_case_e_user_two() {
        let g = reference_gaussian();
        let info = g.info_quantities();
        match epsilon_gaussian_tin(&g, 1.0, 5.0).unwrap() {
            LadderOutcome::Case { user, case, r0, .. } => {
                assert_eq!((user, case), (User::Two, LadderCase::E));
                let t1 = (info.c_star[0] - 2.0 * info.c[0]) / (info.c_star[0] - info.c[0] - 1.0);
                assert!((r0 - 1.1747).abs() < 5e-4);
                assert!((t1 - 1.1222).abs() < 5e-4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tin_just_above_threshold_is_case_a() {
        let g = reference_gaussian();
        let out = epsilon_gaussian_tin(&g, 0.3721, 5.0).unwrap();
        assert!(matches!(out, LadderOutcome::Case { user: User::Two, case: LadderCase::A, .. }));
        assert_eq!(out.label(), "case1a/i=2");
    }

    #[test]
    fn zero_numerator_at_boundary() {
        let g = reference_gaussian();
        let info = g.info_quantities();
        let out = epsilon_gaussian_tin(&g, info.c[1], 5.0).unwrap();
        assert_eq!(out.value(), Some(0.0));
        let out = epsilon_gaussian_di(&g, info.c_tilde[0], 5.0).unwrap();
        assert_eq!(out.value(), Some(0.0));
    }

    #[test]
    fn di_domain_ends_at_half_tilde_capacity() {
        let g = reference_gaussian();
        let info = g.info_quantities();
        let end = 0.5 * info.c_tilde_star[0].min(info.c_tilde_star[1]);
        assert!((end - 2.4114).abs() < 5e-4);
        assert!(epsilon_gaussian_di(&g, end - 1e-6, 5.0).unwrap().value().is_some());
        assert!(epsilon_gaussian_di(&g, end + 1e-6, 5.0).unwrap().value().is_none());
    }

    fn agree(g: &GaussianIC, lambda: f64, d: f64, mode: DecoderMode) -> std::result::Result<(), TestCaseError> {
        let info = g.info_quantities();
        let generic = epsilon_bound(&info, g.lambda_bar(), lambda, d, mode).unwrap();
        let ladder = epsilon_gaussian(g, lambda, d, mode).unwrap();
        match generic {
            EpsilonBound::Bound { epsilon, .. } => {
                let v = ladder.value();
                prop_assert!(v.is_some_and(|v| (v - epsilon).abs() < 1e-12), "{} vs {:?}", epsilon, ladder);
            }
            EpsilonBound::NotApplicable { .. } => prop_assert!(ladder.value().is_none(), "{:?}", ladder),
            EpsilonBound::Zero => {}
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn ladders_match_generic(
            p1_db in 0.0f64..40.0,
            p2_db in 0.0f64..40.0,
            c1 in 0.05f64..3.0,
            c2 in 0.05f64..3.0,
            u in 0.0f64..1.0,
            d in 0.5f64..10.0,
        ) {
            let g = GaussianIC::from_dbw(p1_db, p2_db, c1, c2).unwrap();
            let info = g.info_quantities();
            let (tin, di) = info.lambda_thresholds();
            for (mode, lo) in [(DecoderMode::Tin, tin), (DecoderMode::Di, di)] {
                let lambda = lo + u * (g.lambda_bar() - lo);
                prop_assume!(lambda > 0.0);
                agree(&g, lambda, d, mode)?;
            }
        }
    }
}
