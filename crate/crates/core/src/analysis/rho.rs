use serde::{Deserialize, Serialize};

use super::DecoderMode;
use crate::channel::{InfoQuantities, User};
use crate::error::{Error, Result};

/// Tolerance under which `C_i*` and `C_{i,i'}` count as equal.
pub(crate) const ADDITIVE_TOL: f64 = 1e-9;

/// `rho_i(r)` together with the extra constraint `r < r_cap` that applies
/// to additive channels in DI mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoValue {
    pub rho: f64,
    pub r_cap: Option<f64>,
}

impl RhoValue {
    /// Whether `r` respects the cap (always true without one).
    pub fn within_cap(&self, r: f64) -> bool {
        self.r_cap.is_none_or(|cap| r < cap)
    }
}

/// The `(a, b)` pairs whose ratios `(lambda r - b) / (a - b)` make up
/// `rho_i`, plus the constant `a'` of the cap `r < a' / lambda` if any.
pub fn rho_terms(info: &InfoQuantities, user: User, mode: DecoderMode) -> Result<(Vec<(f64, f64)>, Option<f64>)> {
    let i = user.index();
    let check = |a: f64, b: f64| {
        if a - b > 0.0 {
            Ok((a, b))
        } else {
            Err(Error::Denominator {
                user: user.number(),
                numerator_term: b,
                denominator_term: a,
            })
        }
    };
    match mode {
        DecoderMode::Tin => Ok((vec![check(info.c_star[i], info.c[i])?], None)),
        DecoderMode::Di => {
            let tilde = check(info.c_tilde_star[i], info.c_tilde[i])?;
            if (info.c_star[i] - info.c_cross[i]).abs() < ADDITIVE_TOL {
                Ok((vec![tilde], Some(info.c_star[i])))
            } else {
                Ok((vec![check(info.c_star[i], info.c_cross[i])?, tilde], None))
            }
        }
    }
}

/// `rho_i(r)` for the given decoder. May be negative.
pub fn rho(info: &InfoQuantities, user: User, r: f64, lambda: f64, mode: DecoderMode) -> Result<RhoValue> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("r must be positive, got {r}")));
    }
    let (terms, cap) = rho_terms(info, user, mode)?;
    let rho = terms
        .iter()
        .map(|(a, b)| (lambda * r - b) / (a - b))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(RhoValue {
        rho,
        r_cap: cap.map(|c| c / lambda),
    })
}
