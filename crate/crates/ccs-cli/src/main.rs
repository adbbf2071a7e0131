//! Command-line simulator for cognitive compressive sensing experiments.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ccs_core::belief::{initial_beliefs, BeliefVector};
use ccs_core::channel::ChannelParams;
use ccs_core::policy::{exact_policy_value, exact_value_function, select_action, PolicySpec};
use ccs_core::reward::{expected_reward, RewardKind};
use ccs_core::sim::{reproduce_fig2, write_rows_csv, write_rows_json, ExperimentConfig, SweepRow};

#[derive(Parser)]
#[command(
    name = "ccs",
    version,
    about = "Simulate compressive spectrum sensing policies over restless Markov channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one Monte Carlo experiment and emit a single result row.
    Simulate(SimulateArgs),
    /// Run a grid of experiments over N, K, and policy lists.
    Sweep(SweepArgs),
    /// Run a built-in benchmark grid (case 1 or 2): CCS myopic vs K-arm
    /// selection for K in {3,5}, N in 6..=20, idle collector.
    ReproduceFig2(Fig2Args),
    /// Print the action a policy picks for a belief vector, with its
    /// expected immediate reward.
    PolicyEval(PolicyEvalArgs),
    /// Exact finite-horizon value of a tiny instance vs a fixed policy.
    DpEval(DpEvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RewardArg {
    Idle,
    Busy,
}

impl From<RewardArg> for RewardKind {
    fn from(r: RewardArg) -> Self {
        match r {
            RewardArg::Idle => RewardKind::Idle,
            RewardArg::Busy => RewardKind::Busy,
        }
    }
}

fn parse_policy(s: &str) -> Result<PolicySpec, String> {
    match s {
        "karm" => Ok(PolicySpec::KArm),
        "myopic-ccs-idle" => Ok(PolicySpec::MyopicCcsIdle),
        "greedy-ccs-idle" => Ok(PolicySpec::GreedyCcsIdle),
        "myopic-ccs-busy-exhaustive" => Ok(PolicySpec::MyopicCcsBusyExhaustive),
        "oracle" => Ok(PolicySpec::Oracle),
        other => Err(format!(
            "unknown policy `{other}` (expected karm, myopic-ccs-idle, greedy-ccs-idle, \
             myopic-ccs-busy-exhaustive, or oracle)"
        )),
    }
}

/// Channel-parameter options shared by the experiment subcommands.
#[derive(Args, Debug)]
struct ParamArgs {
    /// Idle -> idle transition probability (homogeneous channels).
    #[arg(long, requires = "p10", conflicts_with = "params_file")]
    p00: Option<f64>,
    /// Busy -> idle transition probability (homogeneous channels).
    #[arg(long, requires = "p00", conflicts_with = "params_file")]
    p10: Option<f64>,
    /// Heterogeneous parameters: one `p00 p10` line per channel.
    #[arg(long)]
    params_file: Option<PathBuf>,
}

impl ParamArgs {
    /// Builds parameters for `n` channels; a params file also pins `n`.
    fn build(&self, n: Option<usize>) -> Result<(usize, ChannelParams)> {
        if let Some(path) = &self.params_file {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let params = ChannelParams::parse_params_text(&text)?;
            if let Some(n) = n {
                if n != params.n() {
                    bail!(
                        "--n {n} disagrees with {} channels in {}",
                        params.n(),
                        path.display()
                    );
                }
            }
            let n = params.n();
            Ok((n, params))
        } else {
            let n = n.context("--n is required without --params-file")?;
            let (p00, p10) = match (self.p00, self.p10) {
                (Some(a), Some(b)) => (a, b),
                _ => bail!("provide --p00 and --p10, or --params-file"),
            };
            Ok((n, ChannelParams::homogeneous(n, p00, p10)?))
        }
    }
}

/// Output options shared by the experiment subcommands.
#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Include per-trial totals in JSON output.
    #[arg(long)]
    per_trial: bool,
}

impl OutputArgs {
    fn write(&self, rows: &[SweepRow]) -> Result<()> {
        let mut buf = Vec::new();
        match self.format {
            FormatArg::Csv => write_rows_csv(rows, &mut buf)?,
            FormatArg::Json => write_rows_json(rows, self.per_trial, &mut buf)?,
        }
        match &self.out {
            Some(path) => {
                fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?
            }
            None => std::io::stdout().write_all(&buf)?,
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Number of channels.
    #[arg(long)]
    n: Option<usize>,
    /// Sensing budget.
    #[arg(long)]
    k: usize,
    /// Horizon in slots.
    #[arg(long, default_value_t = 30)]
    t: usize,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, value_parser = parse_policy)]
    policy: PolicySpec,
    #[arg(long, value_enum, default_value = "idle")]
    reward: RewardArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sense through the full matrix pipeline instead of the abstract rule.
    #[arg(long)]
    frontend: bool,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Channel counts, comma-separated (e.g. 6,10,14).
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Sensing budgets, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Policies, comma-separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_policy, required = true)]
    policy: Vec<PolicySpec>,
    #[arg(long, default_value_t = 30)]
    t: usize,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, value_enum, default_value = "idle")]
    reward: RewardArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    frontend: bool,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct Fig2Args {
    /// Benchmark case: 1 (30% occupancy) or 2 (20% occupancy).
    #[arg(long)]
    case: u8,
    #[arg(long, default_value_t = 30)]
    t: usize,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PolicyEvalArgs {
    /// Belief vector, comma-separated probabilities of idle.
    #[arg(long, value_delimiter = ',', required = true)]
    beliefs: Vec<f64>,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_policy)]
    policy: PolicySpec,
    #[arg(long, value_enum, default_value = "idle")]
    reward: RewardArg,
}

#[derive(Args, Debug)]
struct DpEvalArgs {
    /// Number of channels (at most 4).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Horizon in slots (at most 4).
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, value_enum, default_value = "idle")]
    reward: RewardArg,
    /// Policy to compare against the optimum; defaults to the myopic policy
    /// matching the reward kind.
    #[arg(long, value_parser = parse_policy)]
    policy: Option<PolicySpec>,
    /// Starting beliefs; the stationary law when omitted.
    #[arg(long, value_delimiter = ',')]
    beliefs: Option<Vec<f64>>,
    #[command(flatten)]
    params: ParamArgs,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::ReproduceFig2(args) => fig2(args),
        Command::PolicyEval(args) => policy_eval(args),
        Command::DpEval(args) => dp_eval(args),
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let (n, params) = args.params.build(args.n)?;
    let config = ExperimentConfig {
        n,
        k: args.k,
        horizon: args.t,
        params,
        policy: args.policy,
        kind: args.reward.into(),
        trials: args.trials,
        seed: args.seed,
        use_sensing_frontend: args.frontend,
    };
    let row = SweepRow::from_experiment(None, &config)?;
    args.output.write(&[row])
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut rows = Vec::new();
    for &n in &args.n {
        let (n, params) = args.params.build(Some(n))?;
        for &k in &args.k {
            for &policy in &args.policy {
                let config = ExperimentConfig {
                    n,
                    k,
                    horizon: args.t,
                    params: params.clone(),
                    policy,
                    kind: args.reward.into(),
                    trials: args.trials,
                    seed: args.seed,
                    use_sensing_frontend: args.frontend,
                };
                rows.push(SweepRow::from_experiment(None, &config)?);
            }
        }
    }
    args.output.write(&rows)
}

fn fig2(args: Fig2Args) -> Result<()> {
    let rows = reproduce_fig2(args.case, &[3, 5], 6..=20, args.t, args.trials, args.seed)?;
    args.output.write(&rows)
}

fn policy_eval(args: PolicyEvalArgs) -> Result<()> {
    let beliefs = BeliefVector::new(args.beliefs)?;
    let kind: RewardKind = args.reward.into();
    let action = select_action(args.policy, &beliefs, args.k, kind)?;
    let value = expected_reward(&beliefs, action.indices(), args.k, kind)?;
    let indices: Vec<String> = action.indices().iter().map(|i| i.to_string()).collect();
    println!("action: {}", indices.join(" "));
    println!("expected_reward: {value}");
    Ok(())
}

fn dp_eval(args: DpEvalArgs) -> Result<()> {
    let (n, params) = args.params.build(args.n)?;
    let kind: RewardKind = args.reward.into();
    let beliefs = match args.beliefs {
        Some(v) => {
            if v.len() != n {
                bail!("--beliefs has {} entries for N = {n}", v.len());
            }
            BeliefVector::new(v)?
        }
        None => initial_beliefs(&params)?,
    };
    let policy = args.policy.unwrap_or(match kind {
        RewardKind::Idle => PolicySpec::MyopicCcsIdle,
        RewardKind::Busy => PolicySpec::MyopicCcsBusyExhaustive,
    });
    let optimal = exact_value_function(&beliefs, args.k, args.t, kind, &params)?;
    let policy_value = exact_policy_value(&beliefs, args.k, args.t, kind, &params, policy)?;
    println!("dp_value: {optimal}");
    println!("policy: {policy}");
    println!("policy_value: {policy_value}");
    println!("gap: {}", optimal - policy_value);
    Ok(())
}
