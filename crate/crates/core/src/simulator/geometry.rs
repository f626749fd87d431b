use serde::{Deserialize, Serialize};

use crate::analysis::DecoderMode;
use crate::channel::{InfoQuantities, User};

/// Codeword intervals `(s, s + 1)` of one user on the axis normalized by
/// the codeword length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// Nondecreasing start times.
    pub starts: Vec<f64>,
}

impl Schedule {
    pub fn new(starts: Vec<f64>) -> Self {
        debug_assert!(starts.windows(2).all(|w| w[0] <= w[1]));
        Self { starts }
    }

    /// Limiting positions `offset + tau_bar_j`.
    pub fn fluid(offset: f64, n_packets: usize, r: f64) -> Self {
        Self::new((1..=n_packets).map(|j| offset + super::tau_bar(j, r)).collect())
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    /// Smallest gap between the end of one codeword and the next start.
    pub fn min_gap(&self) -> Option<f64> {
        self.starts.windows(2).map(|w| w[1] - w[0] - 1.0).reduce(f64::min)
    }
}

/// For every codeword of `a`, the total length it shares with codewords of `b`.
pub fn overlap_with(a: &Schedule, b: &Schedule) -> Vec<f64> {
    let mut k = 0;
    a.starts
        .iter()
        .map(|&s| {
            let e = s + 1.0;
            while k < b.starts.len() && b.starts[k] + 1.0 <= s {
                k += 1;
            }
            let mut mu = 0.0;
            let mut q = k;
            while q < b.starts.len() && b.starts[q] < e {
                mu += (e.min(b.starts[q] + 1.0) - s.max(b.starts[q])).max(0.0);
                q += 1;
            }
            mu
        })
        .collect()
}

/// Overlap fractions `mu` for each codeword of both users.
pub fn overlap_fractions(s1: &Schedule, s2: &Schedule) -> [Vec<f64>; 2] {
    [overlap_with(s1, s2), overlap_with(s2, s1)]
}

/// Strict capacity-threshold test for a codeword of `user` at code rate
/// `r_code` whose fraction `mu` is received under interference.
pub fn decode_success(mu: f64, info: &InfoQuantities, user: User, r_code: f64, mode: DecoderMode) -> bool {
    let i = user.index();
    match mode {
        DecoderMode::Tin => own_threshold(mu, info.c_star[i], info.c[i], r_code),
        DecoderMode::Di => {
            own_threshold(mu, info.c_star[i], info.c_cross[i], r_code)
                && interferer_decodable(mu, info, user, r_code)
        }
    }
}

fn own_threshold(mu: f64, clean: f64, hit: f64, r_code: f64) -> bool {
    r_code < (1.0 - mu) * clean + mu * hit
}

/// Whether Rx `user` can decode an interfering codeword of which a
/// fraction `mu` overlaps its own transmissions.
pub fn interferer_decodable(mu: f64, info: &InfoQuantities, user: User, r_code: f64) -> bool {
    let i = user.index();
    own_threshold(mu, info.c_tilde_star[i], info.c_tilde[i], r_code)
}

/// Which codewords of `user` fail at its receiver.
pub fn codeword_failures(
    own: &Schedule,
    other: &Schedule,
    info: &InfoQuantities,
    user: User,
    r_code: f64,
    mode: DecoderMode,
) -> Vec<bool> {
    let mut failed: Vec<bool> = overlap_with(own, other)
        .iter()
        .map(|&mu| !decode_success(mu, info, user, r_code, mode))
        .collect();
    if mode == DecoderMode::Di {
        // Every interfering codeword that touches ours must be decoded first.
        let mu_other = overlap_with(other, own);
        for (q, &mu) in mu_other.iter().enumerate() {
            if mu > 0.0 && !interferer_decodable(mu, info, user, r_code) {
                let (s, e) = (other.starts[q], other.starts[q] + 1.0);
                for (j, &t) in own.starts.iter().enumerate() {
                    if t < e && s < t + 1.0 {
                        failed[j] = true;
                    }
                }
            }
        }
    }
    failed
}
