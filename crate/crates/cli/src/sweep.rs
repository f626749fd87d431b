//! Parameter sweeps written as CSV.
//!
//! Every row is one grid point, one `N`, one decoder mode and one user.
//! `rho`, `beta` and the outage columns are evaluated at `--r`; a lambda
//! sweep without `--r` evaluates `rho` and `beta` at `r0` and leaves the
//! outage columns empty.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use ic_outage::analysis::{kappa, outage_ub_finite_n, outage_ub_limit, rho, RhoValue};
use ic_outage::{DecoderMode, EpsilonBound, Error, OutageInputs, User};
use rayon::prelude::*;

use crate::{emit, ChannelArgs, Failure, LoadedChannel, ModeArg};

pub const HEADER: [&str; 14] = [
    "variable",
    "value",
    "user",
    "N",
    "mode",
    "rho",
    "beta",
    "kappa",
    "chi1",
    "chi2",
    "p_outage_finiteN",
    "p_outage_limit",
    "epsilon",
    "case_label",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Variable {
    Alpha,
    Lambda,
    NPackets,
    R,
}

impl Variable {
    fn name(self) -> &'static str {
        match self {
            Variable::Alpha => "alpha",
            Variable::Lambda => "lambda",
            Variable::NPackets => "n_packets",
            Variable::R => "r",
        }
    }
}

/// `lo,hi,steps` with `lo < hi` and `steps >= 2`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.hi } else { self.lo + (self.hi - self.lo) * k as f64 / last })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(format!("expected lo,hi,steps, got {s:?}"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
        let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
        if !(lo < hi) {
            return Err(format!("need lo < hi, got {lo} and {hi}"));
        }
        if steps < 2 {
            return Err(format!("need at least 2 steps, got {steps}"));
        }
        Ok(Range { lo, hi, steps })
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum)]
    pub variable: Variable,
    /// Grid as `lo,hi,steps`.
    #[arg(long, conflicts_with = "values", allow_hyphen_values = true)]
    pub range: Option<Range>,
    /// Explicit grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long = "d")]
    pub d_max: Option<f64>,
    /// Packet counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub n_packets: Vec<usize>,
    /// Decoder modes, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "tin")]
    pub mode: Vec<ModeArg>,
    /// Fixed rho for user 1, replacing the channel value.
    #[arg(long, allow_hyphen_values = true)]
    pub rho1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho2: Option<f64>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub variable: Variable,
    pub value: f64,
    pub user: User,
    pub n: usize,
    pub mode: DecoderMode,
    pub rho: Option<f64>,
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    pub chi1: Option<bool>,
    pub chi2: Option<bool>,
    pub p_finite: Option<f64>,
    pub p_limit: Option<f64>,
    pub epsilon: Option<f64>,
    pub case_label: String,
}

impl Row {
    pub fn record(&self) -> Vec<String> {
        let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let b = |x: Option<bool>| x.map(|v| v.to_string()).unwrap_or_default();
        vec![
            self.variable.name().into(),
            self.value.to_string(),
            self.user.number().to_string(),
            self.n.to_string(),
            self.mode.to_string(),
            f(self.rho),
            f(self.beta),
            f(self.kappa),
            b(self.chi1),
            b(self.chi2),
            f(self.p_finite),
            f(self.p_limit),
            f(self.epsilon),
            self.case_label.clone(),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    value: f64,
    lambda: Option<f64>,
    r: Option<f64>,
    d_max: Option<f64>,
    n: usize,
    mode: DecoderMode,
}

struct Plan<'a> {
    variable: Variable,
    channel: Option<&'a LoadedChannel>,
    rho_override: [Option<f64>; 2],
}

impl Plan<'_> {
    fn rows(&self, p: Point) -> Result<Vec<Row>, Failure> {
        let alpha = match (self.variable, p.lambda, p.d_max) {
            (Variable::Alpha, _, _) => Some(p.value),
            (_, Some(l), Some(d)) => Some(l * d),
            _ => None,
        };
        let (epsilon, mut label, r0) = match (self.channel, p.lambda, p.d_max) {
            (Some(ch), Some(lambda), Some(d)) => match ch.epsilon(lambda, d, p.mode) {
                Ok((b, label)) => {
                    let r0 = match b {
                        EpsilonBound::Bound { r0, .. } => Some(r0),
                        _ => None,
                    };
                    (b.value(), label, r0)
                }
                Err(Failure { code: crate::EXIT_CONVERSE, .. }) => (None, "beyond_converse".to_string(), None),
                Err(e) => return Err(e),
            },
            _ => (None, String::new(), None),
        };
        let (r, outage_columns) = match (p.r, r0) {
            (Some(r), _) => (Some(r), true),
            (None, Some(r0)) => (Some(r0), false),
            (None, None) => (None, false),
        };

        let values = match r {
            Some(r) => {
                let mut v = [None; 2];
                for u in User::BOTH {
                    let i = u.index();
                    v[i] = match (self.rho_override[i], self.channel, p.lambda) {
                        (Some(x), _, _) => Some(RhoValue { rho: x, r_cap: None }),
                        (None, Some(ch), Some(lambda)) => match rho(&ch.info, u, r, lambda, p.mode) {
                            Ok(v) => Some(v),
                            Err(Error::Denominator { .. }) => None,
                            Err(e) => return Err(e.into()),
                        },
                        _ => None,
                    };
                }
                v
            }
            None => [None; 2],
        };

        let inputs = match (values, alpha, r) {
            ([Some(a), Some(b)], Some(alpha), Some(r)) => Some(OutageInputs::from_rho_values(alpha, r, [a, b])?),
            _ => None,
        };
        if label.is_empty() && inputs.is_none() {
            label = "n/a".into();
        }

        User::BOTH
            .into_iter()
            .map(|u| {
                let i = u.index();
                let mut row = Row {
                    variable: self.variable,
                    value: p.value,
                    user: u,
                    n: p.n,
                    mode: p.mode,
                    rho: values[i].map(|v| v.rho),
                    beta: None,
                    kappa: alpha.map(kappa),
                    chi1: None,
                    chi2: None,
                    p_finite: None,
                    p_limit: None,
                    epsilon,
                    case_label: label.clone(),
                };
                if let Some(inp) = &inputs {
                    row.beta = Some(inp.beta[i]);
                    row.chi1 = Some(inp.chi1[i]);
                    row.chi2 = Some(inp.chi2[i]);
                    if outage_columns {
                        row.p_limit = Some(outage_ub_limit(inp, u));
                        row.p_finite = Some(if inp.rho[i] < 0.0 {
                            0.0
                        } else {
                            outage_ub_finite_n(inp, p.n, u)?.value
                        });
                    }
                } else if let Some(v) = values[i] {
                    row.beta = r.map(|r| v.rho / r);
                }
                Ok(row)
            })
            .collect()
    }
}

fn grid(args: &SweepArgs) -> Result<Vec<f64>, Failure> {
    let mut g = match (&args.range, &args.values) {
        (Some(r), None) => r.points(),
        (None, Some(v)) if !v.is_empty() => v.clone(),
        _ => return Err(Failure::config("give exactly one of --range or --values")),
    };
    if args.variable == Variable::NPackets {
        if g.iter().any(|&v| !(v >= 1.0)) {
            return Err(Failure::config("n_packets values must be at least 1"));
        }
        g = g.into_iter().map(f64::round).collect();
        g.dedup();
    }
    Ok(g)
}

fn points(args: &SweepArgs) -> Result<Vec<Point>, Failure> {
    let grid = grid(args)?;
    let modes: Vec<DecoderMode> = args.mode.iter().map(|&m| m.into()).collect();
    if args.n_packets.contains(&0) {
        return Err(Failure::config("n_packets must be at least 1"));
    }
    let mut out = Vec::new();
    for &value in &grid {
        let mut base = Point {
            value,
            lambda: args.lambda,
            r: args.r,
            d_max: args.d_max,
            n: 0,
            mode: DecoderMode::Tin,
        };
        let ns = match args.variable {
            Variable::NPackets => vec![value as usize],
            _ => args.n_packets.clone(),
        };
        match args.variable {
            Variable::Alpha => base.d_max = args.lambda.map(|l| value / l),
            Variable::Lambda => base.lambda = Some(value),
            Variable::R => base.r = Some(value),
            Variable::NPackets => {}
        }
        for &n in &ns {
            for &mode in &modes {
                out.push(Point { n, mode, ..base });
            }
        }
    }
    Ok(out)
}

pub fn rows(args: &SweepArgs) -> Result<Vec<Row>, Failure> {
    let rho_override = [args.rho1, args.rho2];
    let loaded = if args.channel.is_given() {
        Some(args.channel.load()?)
    } else if rho_override.iter().all(Option::is_some) {
        None
    } else {
        return Err(Failure::config("a sweep needs a channel or both --rho1 and --rho2"));
    };
    if loaded.is_some() && args.lambda.is_none() && args.variable != Variable::Lambda {
        return Err(Failure::config("--lambda is required unless it is the swept variable"));
    }
    if args.variable == Variable::Alpha && args.d_max.is_some() {
        return Err(Failure::config("--d is implied by alpha and lambda in an alpha sweep"));
    }
    if args.variable == Variable::Alpha && rho_override.iter().all(Option::is_some) && args.r.is_none() {
        return Err(Failure::config("an alpha sweep needs --r"));
    }
    let plan = Plan {
        variable: args.variable,
        channel: loaded.as_ref(),
        rho_override,
    };
    let pts = points(args)?;
    let chunks: Vec<Result<Vec<Row>, Failure>> = pts.par_iter().map(|&p| plan.rows(p)).collect();
    let mut rows = Vec::with_capacity(pts.len() * 2);
    for c in chunks {
        rows.extend(c?);
    }
    rows.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.n.cmp(&b.n))
            .then(a.mode.as_str().cmp(b.mode.as_str()))
            .then(a.user.index().cmp(&b.user.index()))
    });
    Ok(rows)
}

pub fn write_csv(rows: &[Row], sink: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &SweepArgs) -> Result<(), Failure> {
    let rows = rows(args)?;
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Failure::io(&path.display().to_string(), e))?;
            write_csv(&rows, std::io::BufWriter::new(file))
        }
        None => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).map_err(|e| Failure::io("csv", e))?;
            return emit(&String::from_utf8_lossy(&buf));
        }
    }
    .map_err(|e| Failure::io("csv", e))
}
