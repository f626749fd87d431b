//! Converse threshold `lambda_bar = min_i max_{pi1, pi2} C_{i,i'}` for
//! discrete channels.
//!
//! `C_{i,i'}` is linear in the interferer's law, so for each user the outer
//! maximum sits at a point mass on one interferer symbol. What remains is a
//! point-to-point capacity per symbol, found by a simplex grid search
//! followed by a Nelder-Mead polish.

use serde::{Deserialize, Serialize};

use super::{DiscreteIC, InputDistribution, User};
use crate::error::Result;

/// Largest number of grid points evaluated per (user, interferer symbol).
const MAX_GRID_POINTS: f64 = 250_000.0;

#[derive(Debug, Clone, Copy)]
pub struct LambdaBarOptions {
    /// Grid spacing is `1 / resolution` per coordinate.
    pub resolution: usize,
    /// Run the local refinement after the grid search.
    pub refine: bool,
}

impl Default for LambdaBarOptions {
    fn default() -> Self {
        Self {
            resolution: 64,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserOptimum {
    pub value: f64,
    pub own: InputDistribution,
    pub interferer: InputDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaBar {
    pub value: f64,
    pub per_user: [UserOptimum; 2],
}

impl DiscreteIC {
    pub fn lambda_bar(&self, opts: LambdaBarOptions) -> Result<LambdaBar> {
        self.validate()?;
        let per_user = [self.user_optimum(User::One, opts), self.user_optimum(User::Two, opts)];
        let value = per_user[0].value.min(per_user[1].value);
        Ok(LambdaBar { value, per_user })
    }

    fn user_optimum(&self, user: User, opts: LambdaBarOptions) -> UserOptimum {
        let k = self.input_size(user);
        let k_other = self.input_size(user.other());
        let mut best: Option<(f64, Vec<f64>, usize)> = None;
        for symbol in 0..k_other {
            let objective = |p: &[f64]| self.conditional_mi(user, p, symbol);
            let (mut value, mut point) = grid_search(k, opts.resolution, &objective);
            if opts.refine && k > 1 {
                let (v, p) = nelder_mead(&point, 1.0 / opts.resolution as f64, &objective);
                if v > value {
                    value = v;
                    point = p;
                }
            }
            if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
                best = Some((value, point, symbol));
            }
        }
        let (value, point, symbol) = best.expect("alphabets are nonempty");
        UserOptimum {
            value,
            own: InputDistribution::new(point).expect("grid points are distributions"),
            interferer: InputDistribution::point_mass(k_other, symbol),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Enumerates all `(c_1, ..., c_k)` with `c_j >= 0`, `sum c_j = total`.
fn for_each_composition(k: usize, total: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(buf: &mut Vec<usize>, k: usize, left: usize, f: &mut impl FnMut(&[usize])) {
        if buf.len() + 1 == k {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for c in 0..=left {
            buf.push(c);
            rec(buf, k, left - c, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(k);
    rec(&mut buf, k, total, f);
}

fn grid_search(k: usize, resolution: usize, objective: &impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let mut res = resolution.max(1);
    while res > 1 && binomial(res + k - 1, k - 1) > MAX_GRID_POINTS {
        res /= 2;
    }
    let mut best = (f64::NEG_INFINITY, vec![1.0 / k as f64; k]);
    let mut point = vec![0.0; k];
    for_each_composition(k, res, &mut |c| {
        for (p, n) in point.iter_mut().zip(c) {
            *p = *n as f64 / res as f64;
        }
        let v = objective(&point);
        if v > best.0 {
            best = (v, point.clone());
        }
    });
    best
}

/// Maps free coordinates `x` (the first `k - 1` probabilities) onto the
/// simplex by clipping and renormalizing.
fn to_simplex(x: &[f64]) -> Vec<f64> {
    let mut p: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let head: f64 = p.iter().sum();
    if head > 1.0 {
        p.iter_mut().for_each(|v| *v /= head);
        p.push(0.0);
    } else {
        p.push(1.0 - head);
    }
    p
}

/// Maximizes `objective` over the simplex starting at `start`.
fn nelder_mead(start: &[f64], step: f64, objective: &impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let dim = start.len() - 1;
    let cost = |x: &[f64]| -objective(&to_simplex(x));

    let x0: Vec<f64> = start[..dim].to_vec();
    let mut simplex: Vec<(f64, Vec<f64>)> = vec![(cost(&x0), x0.clone())];
    for d in 0..dim {
        let mut x = x0.clone();
        x[d] += if x[d] + step <= 1.0 { step } else { -step };
        simplex.push((cost(&x), x));
    }

    for _ in 0..400 {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spread = simplex[dim].0 - simplex[0].0;
        let size = simplex[1..]
            .iter()
            .map(|(_, x)| x.iter().zip(&simplex[0].1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() < 1e-15 && size < 1e-10 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|(_, x)| x[d]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].1.clone();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect()
        };

        let reflected = along(1.0);
        let fr = cost(&reflected);
        if fr < simplex[0].0 {
            let expanded = along(2.0);
            let fe = cost(&expanded);
            simplex[dim] = if fe < fr { (fe, expanded) } else { (fr, reflected) };
        } else if fr < simplex[dim - 1].0 {
            simplex[dim] = (fr, reflected);
        } else {
            let contracted = along(-0.5);
            let fc = cost(&contracted);
            if fc < simplex[dim].0 {
                simplex[dim] = (fc, contracted);
            } else {
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best.iter().zip(&entry.1).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    *entry = (cost(&x), x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (c, x) = &simplex[0];
    (-c, to_simplex(x))
}
