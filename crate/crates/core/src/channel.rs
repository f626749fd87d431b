//! Two-user interference channels and their mutual-information constants.
//!
//! All information quantities are in bits per channel use.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod optimize;

pub use optimize::{LambdaBar, LambdaBarOptions, UserOptimum};

const ROW_SUM_TOL: f64 = 1e-12;

/// One of the two transmitter/receiver pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    pub const BOTH: [User; 2] = [User::One, User::Two];

    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

impl fmt::Display for User {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Probability vector over a finite input alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct InputDistribution {
    probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Distribution("empty probability vector".into()));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::Distribution(format!("entry {i} is {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::Distribution(format!("sums to {sum}")));
        }
        Ok(Self { probs })
    }

    /// `Ber(p)` on `{0, 1}`: symbol 1 has probability `p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    pub fn uniform(size: usize) -> Self {
        Self {
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn point_mass(size: usize, symbol: usize) -> Self {
        let mut probs = vec![0.0; size];
        probs[symbol] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl TryFrom<Vec<f64>> for InputDistribution {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<InputDistribution> for Vec<f64> {
    fn from(d: InputDistribution) -> Self {
        d.probs
    }
}

/// The ten constants the outage analysis needs, indexed by user
/// (`[0]` for user 1, `[1]` for user 2).
///
/// For user `i` with interferer `i'`:
/// - `c_star[i]`: `I(x_i; y_i | x_i' = idle)`
/// - `c[i]`: `I(x_i; y_i)`
/// - `c_cross[i]`: `I(x_i; y_i | x_i')`
/// - `c_tilde_star[i]`: `I(x_i'; y_i | x_i = idle)`
/// - `c_tilde[i]`: `I(x_i'; y_i)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoQuantities {
    pub c_star: [f64; 2],
    pub c: [f64; 2],
    pub c_cross: [f64; 2],
    pub c_tilde_star: [f64; 2],
    pub c_tilde: [f64; 2],
}

impl InfoQuantities {
    pub fn zero() -> Self {
        Self {
            c_star: [0.0; 2],
            c: [0.0; 2],
            c_cross: [0.0; 2],
            c_tilde_star: [0.0; 2],
            c_tilde: [0.0; 2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("c_star", self.c_star),
            ("c", self.c),
            ("c_cross", self.c_cross),
            ("c_tilde_star", self.c_tilde_star),
            ("c_tilde", self.c_tilde),
        ];
        for (name, pair) in all {
            for (i, v) in pair.iter().enumerate() {
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::Parameter(format!("{name}[{}] = {v}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// `(lambda_TIN, lambda_DI)`: `min{C_1, C_2}` and
    /// `min{C_12, C~_1, C_21, C~_2}`.
    pub fn lambda_thresholds(&self) -> (f64, f64) {
        let tin = self.c[0].min(self.c[1]);
        let di = self.c_cross[0]
            .min(self.c_tilde[0])
            .min(self.c_cross[1])
            .min(self.c_tilde[1]);
        (tin, di)
    }
}

/// Free-function form of [`InfoQuantities::lambda_thresholds`].
pub fn lambda_thresholds(info: &InfoQuantities) -> (f64, f64) {
    info.lambda_thresholds()
}

/// Discrete memoryless interference channel.
///
/// Kernel rows are indexed by `x1 * x2_size + x2`; row `(x1, x2)` of
/// `kernel1` is the pmf of `y1` given the pair, likewise `kernel2` for `y2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteIC {
    pub x1_size: usize,
    pub x2_size: usize,
    pub y1_size: usize,
    pub y2_size: usize,
    pub kernel1: Vec<Vec<f64>>,
    pub kernel2: Vec<Vec<f64>>,
    pub idle1: usize,
    pub idle2: usize,
}

/// How the interfering input is treated when computing a mutual information.
#[derive(Clone, Copy)]
enum Interferer {
    Fixed(usize),
    Marginalized,
}

impl DiscreteIC {
    /// Builds a channel whose two receivers see the same kernel.
    pub fn symmetric(
        x1_size: usize,
        x2_size: usize,
        kernel: Vec<Vec<f64>>,
        idle1: usize,
        idle2: usize,
    ) -> Result<Self> {
        let y = kernel.first().map_or(0, Vec::len);
        let ch = Self {
            x1_size,
            x2_size,
            y1_size: y,
            y2_size: y,
            kernel1: kernel.clone(),
            kernel2: kernel,
            idle1,
            idle2,
        };
        ch.validate()?;
        Ok(ch)
    }

    /// Checks shapes, stochasticity of every kernel row and idle indices.
    pub fn validate(&self) -> Result<()> {
        if self.x1_size == 0 || self.x2_size == 0 || self.y1_size == 0 || self.y2_size == 0 {
            return Err(Error::Dimension("alphabet sizes must be positive".into()));
        }
        let rows = self.x1_size * self.x2_size;
        for (k, (kernel, ysize)) in [(&self.kernel1, self.y1_size), (&self.kernel2, self.y2_size)]
            .into_iter()
            .enumerate()
        {
            let kernel_no = k as u8 + 1;
            if kernel.len() != rows {
                return Err(Error::Dimension(format!(
                    "kernel{kernel_no} has {} rows, expected {rows}",
                    kernel.len()
                )));
            }
            for (row, probs) in kernel.iter().enumerate() {
                if probs.len() != ysize {
                    return Err(Error::Dimension(format!(
                        "kernel{kernel_no} row {row} has {} columns, expected {ysize}",
                        probs.len()
                    )));
                }
                if let Some((col, &value)) = probs
                    .iter()
                    .enumerate()
                    .find(|(_, v)| !v.is_finite() || **v < 0.0)
                {
                    return Err(Error::NegativeEntry {
                        kernel: kernel_no,
                        row,
                        col,
                        value,
                    });
                }
                let sum: f64 = probs.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOL {
                    return Err(Error::RowSum {
                        kernel: kernel_no,
                        row,
                        sum,
                        deviation: sum - 1.0,
                    });
                }
            }
        }
        if self.idle1 >= self.x1_size {
            return Err(Error::IdleOutOfRange {
                user: 1,
                index: self.idle1,
                size: self.x1_size,
            });
        }
        if self.idle2 >= self.x2_size {
            return Err(Error::IdleOutOfRange {
                user: 2,
                index: self.idle2,
                size: self.x2_size,
            });
        }
        Ok(())
    }

    pub fn input_size(&self, user: User) -> usize {
        match user {
            User::One => self.x1_size,
            User::Two => self.x2_size,
        }
    }

    pub fn idle(&self, user: User) -> usize {
        match user {
            User::One => self.idle1,
            User::Two => self.idle2,
        }
    }

    /// Output pmf at receiver `rx` when user `rx` sends `own` and the
    /// other user sends `other`.
    pub(crate) fn row(&self, rx: User, own: usize, other: usize) -> &[f64] {
        match rx {
            User::One => &self.kernel1[own * self.x2_size + other],
            User::Two => &self.kernel2[other * self.x2_size + own],
        }
    }

    /// Conditional output pmfs at `rx` indexed by the symbol of `signal`,
    /// with the remaining input handled per `interferer`.
    fn conditional_rows(
        &self,
        rx: User,
        signal: User,
        interferer: Interferer,
        interferer_law: &[f64],
    ) -> Vec<Vec<f64>> {
        let ysize = match rx {
            User::One => self.y1_size,
            User::Two => self.y2_size,
        };
        let rest = signal.other();
        (0..self.input_size(signal))
            .map(|s| {
                let pick = |t: usize| {
                    if signal == rx {
                        self.row(rx, s, t)
                    } else {
                        self.row(rx, t, s)
                    }
                };
                match interferer {
                    Interferer::Fixed(t) => pick(t).to_vec(),
                    Interferer::Marginalized => {
                        let mut out = vec![0.0; ysize];
                        for t in 0..self.input_size(rest) {
                            let w = interferer_law[t];
                            if w == 0.0 {
                                continue;
                            }
                            for (o, p) in out.iter_mut().zip(pick(t)) {
                                *o += w * p;
                            }
                        }
                        out
                    }
                }
            })
            .collect()
    }

    /// `I(x_own; y_rx | x_other = symbol)` as a function of the law of the
    /// own input. Used by the converse-threshold search.
    pub(crate) fn conditional_mi(&self, rx: User, own_law: &[f64], other_symbol: usize) -> f64 {
        let rows = self.conditional_rows(rx, rx, Interferer::Fixed(other_symbol), &[]);
        mutual_information(own_law, &rows)
    }

    fn check_inputs(&self, pi1: &InputDistribution, pi2: &InputDistribution) -> Result<()> {
        if pi1.len() != self.x1_size || pi2.len() != self.x2_size {
            return Err(Error::Dimension(format!(
                "input distributions have sizes ({}, {}), alphabets are ({}, {})",
                pi1.len(),
                pi2.len(),
                self.x1_size,
                self.x2_size
            )));
        }
        Ok(())
    }

    /// Exact evaluation of all ten constants for independent inputs
    /// `pi1`, `pi2`.
    pub fn info_quantities(
        &self,
        pi1: &InputDistribution,
        pi2: &InputDistribution,
    ) -> Result<InfoQuantities> {
        self.validate()?;
        self.check_inputs(pi1, pi2)?;
        let laws = [pi1.probs(), pi2.probs()];
        let mut q = InfoQuantities::zero();
        for rx in User::BOTH {
            let i = rx.index();
            let other = rx.other();
            let own_law = laws[i];
            let other_law = laws[other.index()];

            let rows = self.conditional_rows(rx, rx, Interferer::Fixed(self.idle(other)), &[]);
            q.c_star[i] = mutual_information(own_law, &rows);

            let rows = self.conditional_rows(rx, rx, Interferer::Marginalized, other_law);
            q.c[i] = mutual_information(own_law, &rows);

            q.c_cross[i] = other_law
                .iter()
                .enumerate()
                .filter(|(_, w)| **w > 0.0)
                .map(|(t, w)| w * self.conditional_mi(rx, own_law, t))
                .sum();

            let rows = self.conditional_rows(rx, other, Interferer::Fixed(self.idle(rx)), &[]);
            q.c_tilde_star[i] = mutual_information(other_law, &rows);

            let rows = self.conditional_rows(rx, other, Interferer::Marginalized, own_law);
            q.c_tilde[i] = mutual_information(other_law, &rows);
        }
        Ok(q)
    }
}

/// `I(X; Y)` in bits for input law `px` and conditional pmfs `rows[x]`.
///
/// Terms with `p(x) = 0` or `p(y|x) = 0` contribute nothing; `p(y) > 0`
/// whenever such a term is nonzero, so the sum is always finite.
pub fn mutual_information(px: &[f64], rows: &[Vec<f64>]) -> f64 {
    debug_assert_eq!(px.len(), rows.len());
    let ysize = rows.first().map_or(0, Vec::len);
    let mut py = vec![0.0; ysize];
    for (w, row) in px.iter().zip(rows) {
        for (acc, p) in py.iter_mut().zip(row) {
            *acc += w * p;
        }
    }
    let mut total = 0.0;
    for (w, row) in px.iter().zip(rows) {
        if *w <= 0.0 {
            continue;
        }
        let mut inner = 0.0;
        for (p, q) in row.iter().zip(&py) {
            if *p > 0.0 {
                inner += p * (p / q).log2();
            }
        }
        total += w * inner;
    }
    total.max(0.0)
}

/// Gaussian capacity function `C(x) = 1/2 log2(1 + x)`.
pub fn gaussian_capacity(snr: f64) -> f64 {
    0.5 * (1.0 + snr).log2()
}

/// Converts dBW to linear watts.
pub fn dbw_to_watts(dbw: f64) -> f64 {
    10f64.powf(dbw / 10.0)
}

/// `y_i = x_i + sqrt(c_i) x_i' + z_i` with unit-variance noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianIC {
    pub p1: f64,
    pub p2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl GaussianIC {
    pub fn new(p1: f64, p2: f64, c1: f64, c2: f64) -> Result<Self> {
        let ch = Self { p1, p2, c1, c2 };
        ch.validate()?;
        Ok(ch)
    }

    pub fn from_dbw(p1_dbw: f64, p2_dbw: f64, c1: f64, c2: f64) -> Result<Self> {
        Self::new(dbw_to_watts(p1_dbw), dbw_to_watts(p2_dbw), c1, c2)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::Parameter(format!("{name} must be positive, got {p}")));
            }
        }
        for (name, c) in [("c1", self.c1), ("c2", self.c2)] {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::Parameter(format!(
                    "{name} must be nonnegative, got {c}"
                )));
            }
        }
        Ok(())
    }

    fn powers(&self) -> [f64; 2] {
        [self.p1, self.p2]
    }

    fn gains(&self) -> [f64; 2] {
        [self.c1, self.c2]
    }

    /// Closed forms under Gaussian codebooks.
    pub fn info_quantities(&self) -> InfoQuantities {
        let p = self.powers();
        let g = self.gains();
        let mut q = InfoQuantities::zero();
        for i in 0..2 {
            let j = 1 - i;
            let own = gaussian_capacity(p[i]);
            q.c_star[i] = own;
            q.c_cross[i] = own;
            q.c[i] = gaussian_capacity(p[i] / (1.0 + g[i] * p[j]));
            q.c_tilde_star[i] = gaussian_capacity(g[i] * p[j]);
            q.c_tilde[i] = gaussian_capacity(g[i] * p[j] / (1.0 + p[i]));
        }
        q
    }

    /// `min{C(P_1), C(P_2)}`.
    pub fn lambda_bar(&self) -> f64 {
        gaussian_capacity(self.p1).min(gaussian_capacity(self.p2))
    }
}
