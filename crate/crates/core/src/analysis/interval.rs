use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open interval `(lo, hi)`; `hi` may be `+inf`. Empty when `lo >= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn unbounded(lo: f64) -> Self {
        Self { lo, hi: f64::INFINITY }
    }

    pub fn empty() -> Self {
        Self { lo: 0.0, hi: 0.0 }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn is_unbounded(&self) -> bool {
        self.hi == f64::INFINITY
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let out = Interval::new(self.lo.max(other.lo), self.hi.min(other.hi));
        if out.is_empty() {
            Interval::empty()
        } else {
            out
        }
    }

    pub fn scale(&self, factor: f64) -> Interval {
        Interval::new(self.lo * factor, self.hi * factor)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("(empty)")
        } else if self.is_unbounded() {
            write!(f, "({}, inf)", self.lo)
        } else {
            write!(f, "({}, {})", self.lo, self.hi)
        }
    }
}

/// Intervals `A_j` of normalized asynchrony for which all of a user's
/// codewords clear their decoding threshold.
///
/// `A_j = ((j-1) r + rho, j r - rho)` for `j < N` and
/// `A_N = ((N-1) r + rho, inf)`. Inverted bounds are kept as computed
/// and report `is_empty()`.
pub fn admissible_intervals(r: f64, rho: f64, n_packets: usize) -> Result<Vec<Interval>> {
    if !(r > 1.0) {
        return Err(Error::Parameter(format!(
            "admissible intervals need r > 1, got {r}"
        )));
    }
    if n_packets == 0 {
        return Err(Error::Parameter("n_packets must be at least 1".into()));
    }
    let mut out: Vec<Interval> = (1..n_packets)
        .map(|j| Interval::new((j - 1) as f64 * r + rho, j as f64 * r - rho))
        .collect();
    out.push(Interval::unbounded((n_packets - 1) as f64 * r + rho));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma1Case {
    /// `lambda < min{b, a/2}`
    I,
    /// `a/2 <= lambda < b`
    II,
    /// `b <= lambda < a/2`
    III,
    /// `lambda >= max{b, a/2}`
    IV,
}

impl Lemma1Case {
    pub fn of(a: f64, b: f64, lambda: f64) -> Self {
        let half = a / 2.0;
        if lambda < b.min(half) {
            Lemma1Case::I
        } else if half <= lambda && lambda < b {
            Lemma1Case::II
        } else if b <= lambda && lambda < half {
            Lemma1Case::III
        } else {
            Lemma1Case::IV
        }
    }
}

/// Solution set in `r > 1` of `(lambda r - b) / (a - b) < min{1, r - 1}`.
pub fn lemma1_intervals(a: f64, b: f64, lambda: f64) -> Result<(Interval, Lemma1Case)> {
    if !(a > b) || b < 0.0 {
        return Err(Error::Parameter(format!(
            "need a > b >= 0, got a = {a}, b = {b}"
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let case = Lemma1Case::of(a, b, lambda);
    let t = || (a - 2.0 * b) / (a - b - lambda);
    let iv = match case {
        Lemma1Case::I => Interval::new(1.0, a / lambda),
        Lemma1Case::II => Interval::new(1.0, t()),
        Lemma1Case::III => Interval::new(t(), a / lambda),
        Lemma1Case::IV => Interval::empty(),
    };
    Ok((iv, case))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn substitution() {
        let a = admissible_intervals(2.0, 0.5, 2).unwrap();
        assert_eq!(a, vec![Interval::new(0.5, 1.5), Interval::unbounded(2.5)]);
    }

    #[test]
    fn hand_endpoints() {
        let a = admissible_intervals(1.1, 0.0501, 3).unwrap();
        let expect = [(0.0501, 1.0499), (1.1501, 2.1499), (2.2501, f64::INFINITY)];
        for (iv, (lo, hi)) in a.iter().zip(expect) {
            assert!((iv.lo - lo).abs() < 1e-12);
            assert!(iv.hi == hi || (iv.hi - hi).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_rho_covers_half_line() {
        let rho = -0.2;
        let a = admissible_intervals(1.5, rho, 4).unwrap();
        for w in a.windows(2) {
            assert!(w[0].hi > w[1].lo);
        }
        assert!(a[0].lo < 0.0);
    }

    #[test]
    fn inverted_interval_is_empty() {
        let a = admissible_intervals(1.2, 0.7, 2).unwrap();
        assert!(a[0].is_empty());
        assert!(!a[1].is_empty());
        assert!(admissible_intervals(1.0, 0.1, 2).is_err());
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_intervals(4.0, 1.0, 0.5).unwrap(), (Interval::new(1.0, 8.0), Lemma1Case::I));
        let (iv, case) = lemma1_intervals(4.0, 1.0, 1.5).unwrap();
        assert_eq!(case, Lemma1Case::III);
        assert!((iv.lo - 4.0 / 3.0).abs() < 1e-12 && (iv.hi - 8.0 / 3.0).abs() < 1e-12);
        let (iv, case) = lemma1_intervals(4.0, 1.0, 2.5).unwrap();
        assert_eq!(case, Lemma1Case::IV);
        assert!(iv.is_empty());
        assert!(lemma1_intervals(1.0, 1.0, 0.5).is_err());
    }

    fn satisfies(a: f64, b: f64, lambda: f64, r: f64) -> bool {
        (lambda * r - b) / (a - b) < 1f64.min(r - 1.0)
    }

    proptest! {
        #[test]
        fn lemma1_matches_direct_inequality(
            a in 0.1f64..10.0,
            frac in 0.0f64..0.99,
            lambda in 0.01f64..6.0,
            u in 0.0f64..1.0,
        ) {
            let b = a * frac;
            let (iv, case) = lemma1_intervals(a, b, lambda).unwrap();
            // Sample r away from the endpoints to avoid rounding at the boundary.
            let r = 1.0 + 1e-9 + u * (a / lambda).max(3.0);
            let margin = 1e-7;
            if iv.contains(r) && (r - iv.lo).abs() > margin && (iv.hi - r).abs() > margin {
                prop_assert!(satisfies(a, b, lambda, r));
            }
            if !iv.contains(r) && (r - iv.lo).abs() > margin && (r - iv.hi).abs() > margin {
                prop_assert!(!satisfies(a, b, lambda, r));
            }
            let t = (a - 2.0 * b) / (a - b - lambda);
            match case {
                Lemma1Case::II => prop_assert!(t > 1.0 && t <= 2.0 + 1e-12),
                Lemma1Case::III => prop_assert!(t >= 1.0 - 1e-12 && t < 2.0),
                _ => {}
            }
        }
    }
}
