use std::path::PathBuf;

use clap::Args;
use ic_outage::analysis::outage_ub_finite_n;
use ic_outage::simulator::run_trials;
use ic_outage::{DecoderMode, OutageInputs, SchemeParams, SimConfig, SimMode, SimResult, User};

use crate::{emit, ChannelArgs, Failure, ModeArg, EXIT_CHECK};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 1)]
    pub n_packets: usize,
    #[arg(long = "d", default_value_t = 5.0)]
    pub d_max: f64,
    /// Decoder for both receivers, or one per receiver (`tin,di`).
    #[arg(long, value_enum, value_delimiter = ',', default_value = "tin")]
    pub decoder: Vec<ModeArg>,
    #[arg(long, default_value = "fluid")]
    pub mode: SimMode,
    /// Bits per source (stochastic mode).
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compare with the finite-N closed form; fail outside 4 sigma.
    #[arg(long)]
    pub check: bool,
    /// Per-user summary CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckLine {
    pub user: User,
    pub empirical: f64,
    pub closed_form: f64,
    pub sigma: f64,
    pub pass: bool,
}

impl SimulateArgs {
    pub fn config(&self) -> Result<SimConfig, Failure> {
        let decoder: [DecoderMode; 2] = match self.decoder[..] {
            [m] => [m.into(); 2],
            [a, b] => [a.into(), b.into()],
            _ => return Err(Failure::config("--decoder takes one or two modes")),
        };
        let mut scheme = SchemeParams::new(self.lambda, self.r, self.n_packets, self.d_max, decoder[0])?;
        scheme.decoder = decoder;
        match (self.mode, self.n) {
            (SimMode::Stochastic, None) => return Err(Failure::config("stochastic mode needs --n")),
            (SimMode::Fluid, Some(_)) => return Err(Failure::config("--n applies to stochastic mode only")),
            _ => {}
        }
        let cfg = SimConfig {
            scheme,
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            mode: self.mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Empirical outage against the closed form with a 4 sigma binomial band.
pub fn check(result: &SimResult, inputs: &OutageInputs, n_packets: usize) -> Result<[CheckLine; 2], Failure> {
    let line = |u: User| -> Result<CheckLine, Failure> {
        let i = u.index();
        let p = if inputs.rho[i] < 0.0 {
            0.0
        } else {
            outage_ub_finite_n(inputs, n_packets, u)?.value.clamp(0.0, 1.0)
        };
        let sigma = (p * (1.0 - p) / result.trials as f64).sqrt();
        let empirical = result.outage[i];
        Ok(CheckLine {
            user: u,
            empirical,
            closed_form: p,
            sigma,
            pass: (empirical - p).abs() <= 4.0 * sigma + 1e-12,
        })
    };
    Ok([line(User::One)?, line(User::Two)?])
}

fn write_csv(path: &PathBuf, res: &SimResult) -> Result<(), Failure> {
    let ctx = path.display().to_string();
    let mut w = csv::Writer::from_path(path).map_err(|e| Failure::io(&ctx, e))?;
    let mut put = |rec: Vec<String>| w.write_record(rec).map_err(|e| Failure::io(&ctx, e));
    put(["user", "outage", "halfwidth", "rate", "outages", "trials", "seed", "mode"].map(String::from).to_vec())?;
    for u in User::BOTH {
        let i = u.index();
        put(vec![
            u.number().to_string(),
            res.outage[i].to_string(),
            res.halfwidth[i].to_string(),
            res.rates[i].to_string(),
            res.outages[i].to_string(),
            res.trials.to_string(),
            res.seed.to_string(),
            res.mode.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Failure::io(&ctx, e))
}

pub fn run(args: &SimulateArgs) -> Result<(), Failure> {
    let cfg = args.config()?;
    let ch = args.channel.load()?;
    if let Some(lambda_bar) = ch.lambda_bar {
        if cfg.scheme.lambda > lambda_bar {
            return Err(ic_outage::Error::BeyondConverse {
                lambda: cfg.scheme.lambda,
                lambda_bar,
            }
            .into());
        }
    }
    let inputs = if args.check {
        if !(cfg.scheme.r > 1.0) {
            return Err(Failure::config("--check needs r > 1"));
        }
        Some(OutageInputs::from_scheme(&ch.info, &cfg.scheme)?)
    } else {
        None
    };

    let res = run_trials(&cfg, &ch.info)?;
    let text = serde_json::to_string_pretty(&res).map_err(|e| Failure::io("json", e))?;
    emit(&format!("{text}\n"))?;
    if let Some(path) = &args.csv {
        write_csv(path, &res)?;
    }

    if let Some(inputs) = inputs {
        let lines = check(&res, &inputs, cfg.scheme.n_packets)?;
        for l in &lines {
            eprintln!(
                "check user {}: empirical {:.4} closed form {:.4} sigma {:.4} {}",
                l.user,
                l.empirical,
                l.closed_form,
                l.sigma,
                if l.pass { "ok" } else { "FAIL" }
            );
        }
        if lines.iter().any(|l| !l.pass) {
            return Err(Failure {
                code: EXIT_CHECK,
                message: "empirical outage outside 4 sigma of the closed form".into(),
            });
        }
    }
    Ok(())
}
