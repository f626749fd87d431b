//! Command-line front end for `ic-outage`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ic_outage::analysis::{epsilon_bound, epsilon_gaussian};
use ic_outage::channel::InfoQuantities;
use ic_outage::config::{resolve_power, Channel};
use ic_outage::{ChannelConfig, DecoderMode, EpsilonBound, Error, GaussianIC, InputDistribution};

pub mod analyze;
pub mod simulate;
pub mod sweep;

#[derive(Debug, Parser)]
#[command(name = "ic-outage", version, about = "Outage bounds for interference channels with gradual data arrival")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Information constants, thresholds, r0 and the epsilon bound at one lambda.
    Analyze(analyze::AnalyzeArgs),
    /// CSV sweep over alpha, lambda, N or r.
    Sweep(sweep::SweepArgs),
    /// Monte Carlo simulation of the block transmission scheme.
    Simulate(simulate::SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Tin,
    Di,
}

impl From<ModeArg> for DecoderMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Tin => DecoderMode::Tin,
            ModeArg::Di => DecoderMode::Di,
        }
    }
}

/// Where the channel comes from: a JSON file or Gaussian flags.
#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Channel JSON file.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub p1_dbw: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p2_dbw: Option<f64>,
    /// Linear transmit power of user 1.
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    /// Cross gain into receiver 1.
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    /// Input pmf of user 1, comma separated (discrete channels).
    #[arg(long, value_delimiter = ',')]
    pub pi1: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub pi2: Option<Vec<f64>>,
}

impl ChannelArgs {
    fn gaussian_flags(&self) -> bool {
        [self.p1_dbw, self.p2_dbw, self.p1, self.p2, self.c1, self.c2]
            .iter()
            .any(Option::is_some)
    }

    pub fn is_given(&self) -> bool {
        self.channel.is_some() || self.gaussian_flags()
    }

    pub fn load(&self) -> Result<LoadedChannel, Failure> {
        let channel = match (&self.channel, self.gaussian_flags()) {
            (Some(_), true) => {
                return Err(Failure::config("give either --channel or Gaussian flags, not both"))
            }
            (None, false) => return Err(Failure::config("no channel: give --channel or Gaussian flags")),
            (Some(path), false) => ChannelConfig::load(path)?.resolve()?,
            (None, true) => {
                let p1 = resolve_power("p1", self.p1_dbw, self.p1)?;
                let p2 = resolve_power("p2", self.p2_dbw, self.p2)?;
                let (c1, c2) = match (self.c1, self.c2) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(Failure::config("Gaussian flags need both --c1 and --c2")),
                };
                Channel::Gaussian(GaussianIC::new(p1, p2, c1, c2)?)
            }
        };
        let pmf = |p: &Option<Vec<f64>>| p.clone().map(InputDistribution::new).transpose();
        let (pi1, pi2) = (pmf(&self.pi1)?, pmf(&self.pi2)?);
        if !matches!(channel, Channel::Discrete(_)) && (pi1.is_some() || pi2.is_some()) {
            return Err(Failure::config("--pi1/--pi2 apply to discrete channels only"));
        }
        let info = channel.info_quantities(pi1.as_ref(), pi2.as_ref())?;
        let lambda_bar = channel.lambda_bar()?;
        Ok(LoadedChannel {
            channel,
            info,
            lambda_bar,
        })
    }
}

pub struct LoadedChannel {
    pub channel: Channel,
    pub info: InfoQuantities,
    /// `None` for info-only configs without a converse threshold.
    pub lambda_bar: Option<f64>,
}

impl LoadedChannel {
    /// The epsilon bound and its case label.
    pub fn epsilon(&self, lambda: f64, d_max: f64, mode: DecoderMode) -> Result<(EpsilonBound, String), Failure> {
        let lambda_bar = self.lambda_bar.unwrap_or(f64::INFINITY);
        let bound = epsilon_bound(&self.info, lambda_bar, lambda, d_max, mode)?;
        let label = match (&bound, &self.channel) {
            (EpsilonBound::Zero, _) => "zero".to_string(),
            (EpsilonBound::NotApplicable { .. }, _) => "n/a".to_string(),
            (EpsilonBound::Bound { .. }, Channel::Gaussian(g)) => epsilon_gaussian(g, lambda, d_max, mode)?.label(),
            (EpsilonBound::Bound { user, .. }, _) => format!("bound/i={}", user.number()),
        };
        Ok((bound, label))
    }
}

/// Exit status plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONVERSE: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

impl Failure {
    pub fn config(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: msg.into(),
        }
    }

    pub fn io(context: &str, e: impl fmt::Display) -> Self {
        Self::config(format!("{context}: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BeyondConverse { .. } => EXIT_CONVERSE,
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Sizes the global rayon pool from `IC_OUTAGE_THREADS` when set.
pub fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("IC_OUTAGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::config(format!("IC_OUTAGE_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(Failure::config("IC_OUTAGE_THREADS must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::config(e.to_string()))
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    match cli.command {
        Command::Analyze(a) => analyze::run(&a),
        Command::Sweep(a) => sweep::run(&a),
        Command::Simulate(a) => simulate::run(&a),
    }
}

/// Writes `text` to standard output. A closed pipe is not an error.
pub fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::io("stdout", e)),
        _ => Ok(()),
    }
}

/// Formats `x` with four decimals, or `-` when absent.
pub fn fmt4(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.4}"))
}
