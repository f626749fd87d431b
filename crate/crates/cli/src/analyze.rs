use clap::Args;
use ic_outage::analysis::{outage_ub_finite_n, outage_ub_limit, r0, rho, OutageBound};
use ic_outage::channel::InfoQuantities;
use ic_outage::{DecoderMode, EpsilonBound, OutageInputs, User};
use serde::Serialize;

use crate::{emit, fmt4, ChannelArgs, Failure, ModeArg};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Arrival rate in bits per slot.
    #[arg(long)]
    pub lambda: f64,
    /// Normalized code rate; enables the per-user rho report.
    #[arg(long)]
    pub r: Option<f64>,
    /// Largest activation delay D.
    #[arg(long = "d", default_value_t = 5.0)]
    pub d_max: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Tin)]
    pub mode: ModeArg,
    /// Packets per source; with --r adds the finite-N outage bound.
    #[arg(long)]
    pub n_packets: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
pub struct UserReport {
    pub rho: f64,
    pub beta: f64,
    pub chi1: bool,
    pub chi2: bool,
    pub p_outage_limit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_outage_finite_n: Option<OutageBound>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub info: InfoQuantities,
    pub lambda_tin: f64,
    pub lambda_di: f64,
    pub lambda_bar: Option<f64>,
    pub lambda: f64,
    pub d_max: f64,
    pub mode: DecoderMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_packets: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub users: Option<[UserReport; 2]>,
    pub r0: Option<f64>,
    pub epsilon: EpsilonBound,
    pub case_label: String,
}

pub fn report(args: &AnalyzeArgs) -> Result<AnalyzeReport, Failure> {
    let ch = args.channel.load()?;
    let mode = DecoderMode::from(args.mode);
    let (epsilon, case_label) = ch.epsilon(args.lambda, args.d_max, mode)?;
    let (lambda_tin, lambda_di) = ch.info.lambda_thresholds();
    let r0 = r0(&ch.info, args.lambda, mode)?.value();

    let users = match args.r {
        Some(r) => {
            let v1 = rho(&ch.info, User::One, r, args.lambda, mode)?;
            let v2 = rho(&ch.info, User::Two, r, args.lambda, mode)?;
            let inputs = OutageInputs::from_rho_values(args.lambda * args.d_max, r, [v1, v2])?;
            let user = |u: User| -> Result<UserReport, Failure> {
                let i = u.index();
                let finite = match args.n_packets {
                    Some(n) if inputs.rho[i] >= 0.0 => Some(outage_ub_finite_n(&inputs, n, u)?),
                    _ => None,
                };
                Ok(UserReport {
                    rho: inputs.rho[i],
                    beta: inputs.beta[i],
                    chi1: inputs.chi1[i],
                    chi2: inputs.chi2[i],
                    p_outage_limit: outage_ub_limit(&inputs, u),
                    p_outage_finite_n: finite,
                })
            };
            Some([user(User::One)?, user(User::Two)?])
        }
        None => None,
    };

    Ok(AnalyzeReport {
        info: ch.info,
        lambda_tin,
        lambda_di,
        lambda_bar: ch.lambda_bar,
        lambda: args.lambda,
        d_max: args.d_max,
        mode,
        r: args.r,
        n_packets: args.n_packets,
        users,
        r0,
        epsilon,
        case_label,
    })
}

fn pair(name: &str, v: [f64; 2]) -> String {
    format!("{name:<14}{:>10.4}{:>10.4}\n", v[0], v[1])
}

pub fn render(rep: &AnalyzeReport) -> String {
    let info = &rep.info;
    let mut out = String::new();
    out += &format!("{:<14}{:>10}{:>10}\n", "", "user 1", "user 2");
    out += &pair("C*", info.c_star);
    out += &pair("C", info.c);
    out += &pair("C_cross", info.c_cross);
    out += &pair("C~*", info.c_tilde_star);
    out += &pair("C~", info.c_tilde);
    out += &format!("lambda_TIN    {:.4}\n", rep.lambda_tin);
    out += &format!("lambda_DI     {:.4}\n", rep.lambda_di);
    out += &format!("lambda_bar    {}\n", fmt4(rep.lambda_bar));
    out += &format!("lambda        {}  (D = {}, alpha = {:.4}, {})\n", rep.lambda, rep.d_max, rep.lambda * rep.d_max, rep.mode);
    if let (Some(r), Some(users)) = (rep.r, &rep.users) {
        out += &format!("r             {r}\n");
        out += &pair("rho", [users[0].rho, users[1].rho]);
        out += &pair("beta", [users[0].beta, users[1].beta]);
        out += &format!("{:<14}{:>10}{:>10}\n", "chi1", users[0].chi1, users[1].chi1);
        out += &format!("{:<14}{:>10}{:>10}\n", "chi2", users[0].chi2, users[1].chi2);
        out += &pair("p_out limit", [users[0].p_outage_limit, users[1].p_outage_limit]);
        if let (Some(n), Some(a), Some(b)) = (rep.n_packets, &users[0].p_outage_finite_n, &users[1].p_outage_finite_n) {
            out += &pair(&format!("p_out N={n}"), [a.value, b.value]);
        }
    }
    out += &format!("r0            {}\n", fmt4(rep.r0));
    out += &format!("epsilon       {}  [{}]\n", fmt4(rep.epsilon.value()), rep.case_label);
    if let EpsilonBound::NotApplicable { reason } = &rep.epsilon {
        out += &format!("              {reason}\n");
    }
    out
}

pub fn run(args: &AnalyzeArgs) -> Result<(), Failure> {
    let rep = report(args)?;
    if args.json {
        let text = serde_json::to_string_pretty(&rep).map_err(|e| Failure::io("json", e))?;
        emit(&format!("{text}\n"))
    } else {
        emit(&render(&rep))
    }
}
