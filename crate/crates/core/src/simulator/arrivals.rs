use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{Error, Result};

/// Bit-arrival slots of both sources in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalTrace {
    /// `slots[i][l]` is true when a bit arrives at Tx `i` in slot `l`
    /// after its activation. Each sequence ends at its `n`-th arrival.
    pub slots: [Vec<bool>; 2],
    /// Activation offsets `d_i` in `[0, D]`.
    pub offsets: [f64; 2],
    pub n: u64,
}

impl ArrivalTrace {
    /// Slot-by-slot Bernoulli arrivals. Memory is linear in `n / lambda`,
    /// so this is meant for small `n`.
    pub fn sample<R: Rng + ?Sized>(lambda: f64, n: u64, d_max: f64, rng: &mut R) -> Result<Self> {
        check_lambda(lambda)?;
        let offsets = sample_offsets(d_max, rng);
        let mut one = || {
            let mut v = Vec::new();
            let mut ones = 0;
            while ones < n {
                let bit = rng.random::<f64>() < lambda;
                ones += bit as u64;
                v.push(bit);
            }
            v
        };
        let slots = [one(), one()];
        Ok(Self { slots, offsets, n })
    }

    /// Times `xi_j` (in slots after activation) at which Tx `user` holds
    /// the bits of its first `j` packets.
    pub fn xi(&self, user: usize, n_packets: usize) -> Result<Vec<f64>> {
        let targets = packet_targets(self.n, n_packets)?;
        let mut out = Vec::with_capacity(n_packets);
        let mut ones = 0;
        let mut next = targets.iter().peekable();
        for (l, &bit) in self.slots[user].iter().enumerate() {
            ones += bit as u64;
            while next.peek().is_some_and(|&&t| t == ones) {
                out.push((l + 1) as f64);
                next.next();
            }
        }
        Ok(out)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("lambda must lie in (0, 1], got {lambda}")))
    }
}

/// Cumulative bit counts `ceil(j n / N)` needed before packet `j` can start.
pub(crate) fn packet_targets(n: u64, n_packets: usize) -> Result<Vec<u64>> {
    if n_packets == 0 || n < n_packets as u64 {
        return Err(Error::Parameter(format!(
            "packets of n / N = {n} / {n_packets} bits round to zero"
        )));
    }
    let np = n_packets as u64;
    Ok((1..=np).map(|j| (j * n).div_ceil(np)).collect())
}

/// Independent activation offsets `d_1, d_2 ~ U[0, D]`.
pub fn sample_offsets<R: Rng + ?Sized>(d_max: f64, rng: &mut R) -> [f64; 2] {
    [rng.random::<f64>() * d_max, rng.random::<f64>() * d_max]
}

/// Slots needed to collect `k` Bernoulli(`lambda`) arrivals.
fn waiting_time<R: Rng + ?Sized>(k: u64, lambda: f64, rng: &mut R) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if lambda >= 1.0 {
        return k as f64;
    }
    // Failures before the k-th success are Poisson with a Gamma rate.
    let rate = Gamma::new(k as f64, (1.0 - lambda) / lambda)
        .expect("valid gamma")
        .sample(rng);
    let failures = if rate > 0.0 {
        Poisson::new(rate).expect("valid poisson").sample(rng)
    } else {
        0.0
    };
    k as f64 + failures
}

/// Packet-ready times `xi_j` drawn as sums of negative-binomial gaps.
pub fn sample_xi<R: Rng + ?Sized>(lambda: f64, n: u64, n_packets: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    let targets = packet_targets(n, n_packets)?;
    let mut prev = 0;
    let mut t = 0.0;
    Ok(targets
        .into_iter()
        .map(|k| {
            t += waiting_time(k - prev, lambda, rng);
            prev = k;
            t
        })
        .collect())
}

/// Start times `tau_j = max(tau_{j-1} + len, xi_j)`.
pub fn tau_from_xi(xi: &[f64], codeword_len: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(xi.len());
    let mut prev = f64::NEG_INFINITY;
    for &x in xi {
        let t = (prev + codeword_len).max(x);
        out.push(t);
        prev = t;
    }
    out
}

/// Codeword length `n theta_N = n / (N r lambda)` in slots.
pub fn codeword_len(n: u64, n_packets: usize, r: f64, lambda: f64) -> f64 {
    n as f64 / (n_packets as f64 * r * lambda)
}

/// Codeword start times `tau_j` (slots after activation) for one source.
pub fn simulate_tau<R: Rng + ?Sized>(
    lambda: f64,
    n: u64,
    n_packets: usize,
    r: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(r > 0.0) {
        return Err(Error::Parameter(format!("r must be positive, got {r}")));
    }
    let xi = sample_xi(lambda, n, n_packets, rng)?;
    Ok(tau_from_xi(&xi, codeword_len(n, n_packets, r, lambda)))
}

/// Limiting normalized start `tau_j / (n theta_N)`.
pub fn tau_bar(j: usize, r: f64) -> f64 {
    if r > 1.0 {
        j as f64 * r
    } else {
        r + j as f64 - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tau_bar_values() {
        assert_eq!(tau_bar(1, 0.7), 0.7);
        assert_eq!(tau_bar(1, 1.7), 1.7);
        assert_eq!(tau_bar(4, 1.0), 4.0);
        assert!((tau_bar(3, 1.1) - 3.3).abs() < 1e-15);
    }

    #[test]
    fn deterministic_arrivals() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (n, np, r) = (1000, 10, 0.8);
        let xi = sample_xi(1.0, n, np, &mut rng).unwrap();
        let expect: Vec<f64> = (1..=np).map(|j| (j * 100) as f64).collect();
        assert_eq!(xi, expect);
        let tau = simulate_tau(1.0, n, np, r, &mut rng).unwrap();
        // Codewords of 125 slots back to back after the first packet.
        for (j, t) in tau.iter().enumerate() {
            assert_eq!(*t, 100.0 + 125.0 * j as f64);
        }
    }

    #[test]
    fn trace_matches_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trace = ArrivalTrace::sample(0.3, 50, 2.0, &mut rng).unwrap();
        for user in 0..2 {
            assert_eq!(trace.slots[user].iter().filter(|b| **b).count(), 50);
            assert_eq!(*trace.slots[user].last().unwrap(), true);
            let xi = trace.xi(user, 5).unwrap();
            assert_eq!(xi.len(), 5);
            assert_eq!(xi[4] as usize, trace.slots[user].len());
            assert!(xi.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(trace.offsets.iter().all(|d| (0.0..=2.0).contains(d)));
    }

    #[test]
    fn packets_must_hold_a_bit() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(simulate_tau(0.5, 5, 10, 1.5, &mut rng).is_err());
    }

    #[test]
    fn waiting_time_mean() {
        // Mean of k + NB failures is k / lambda.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (k, lambda, reps) = (20, 0.25, 20_000);
        let mean: f64 = (0..reps).map(|_| waiting_time(k, lambda, &mut rng)).sum::<f64>() / reps as f64;
        let sd = ((k as f64) * (1.0 - lambda)).sqrt() / lambda / (reps as f64).sqrt();
        assert!((mean - 80.0).abs() < 5.0 * sd, "{mean}");
    }

    #[test]
    fn trace_and_gap_sampler_agree_in_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (lambda, n, np, reps) = (0.2, 60, 3, 4000);
        let mut a = 0.0;
        let mut b = 0.0;
        for _ in 0..reps {
            a += ArrivalTrace::sample(lambda, n, 1.0, &mut rng).unwrap().xi(0, np).unwrap()[1];
            b += sample_xi(lambda, n, np, &mut rng).unwrap()[1];
        }
        let (a, b) = (a / reps as f64, b / reps as f64);
        // Both estimate 40 / lambda = 200 with sd about 0.5 each.
        assert!((a - 200.0).abs() < 3.0 && (b - 200.0).abs() < 3.0, "{a} {b}");
    }
}
