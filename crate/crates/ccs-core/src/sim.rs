//! Episode simulation, Monte Carlo aggregation, and file output.
//!
//! An episode initializes the state from the stationary law and the beliefs
//! at the stationary idle probabilities, then for each of T slots: the
//! policy picks an action from the beliefs, the sensed set either yields its
//! exact busy pattern (busy count within the recovery threshold) or an
//! erasure, the realized reward accrues, beliefs update, and the state steps.
//!
//! Determinism contract: an experiment is a pure function of its
//! configuration. Every trial draws from its own pair of counter-derived
//! streams (one for channel dynamics, one for latent amplitudes), so results
//! are bit-identical across serial and parallel execution, and the abstract
//! support-level rule and the full matrix pipeline see identical state
//! trajectories on identical seeds. Because the channels are restless (their
//! evolution never depends on the action), matched seeds also give every
//! policy the same ground-truth trajectory, which sharpens policy
//! comparisons at equal trial counts.

use std::io::Write;
use std::ops::RangeInclusive;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::belief::{initial_beliefs, update_beliefs, SenseOutcome};
use crate::channel::{sample_initial_state, step_state, ChannelParams, StateVector};
use crate::error::{Error, Result};
use crate::policy::{select_action, Action, PolicySpec};
use crate::reward::{realized_reward, RewardKind};
use crate::sensing::{build_vandermonde, l0_recover, observe, sample_latent, DEFAULT_ALPHA_FLOOR};
use crate::support::threshold_gamma;

/// Description of one Monte Carlo experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Number of channels.
    pub n: usize,
    /// Sensing budget (rows of the sensing matrix).
    pub k: usize,
    /// Horizon T in slots.
    pub horizon: usize,
    /// Channel transition probabilities; must cover exactly `n` channels.
    pub params: ChannelParams,
    pub policy: PolicySpec,
    pub kind: RewardKind,
    pub trials: usize,
    pub seed: u64,
    /// Simulate sensing through the full matrix pipeline (build, observe,
    /// recover) instead of the abstract support-level rule. Equivalent by
    /// construction; exponential in the action size, so capped at N <= 12.
    pub use_sensing_frontend: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.k > self.n {
            return Err(Error::InvalidConfig(format!(
                "need 1 <= K <= N (got K = {}, N = {})",
                self.k, self.n
            )));
        }
        if self.horizon < 1 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("need at least one trial".into()));
        }
        if self.params.n() != self.n {
            return Err(Error::InvalidConfig(format!(
                "params cover {} channels, N = {}",
                self.params.n(),
                self.n
            )));
        }
        if self.use_sensing_frontend && self.n > 12 {
            return Err(Error::InvalidConfig(format!(
                "the matrix pipeline enumerates supports; N = {} exceeds 12",
                self.n
            )));
        }
        Ok(())
    }
}

/// Aggregated normalized reward of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    /// Mean over trials of (total reward / T).
    pub mean_normalized_reward: f64,
    /// Standard error of that mean; zero for a single trial.
    pub std_error: f64,
    /// Total reward per trial, in trial order.
    pub per_trial_totals: Vec<u32>,
}

/// SplitMix64 mixing step.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial random streams, derived deterministically from the experiment
/// seed and the trial index.
///
/// Stream `d` of trial `t` is ChaCha12 seeded with
/// `splitmix64(seed ^ splitmix64(2 t + d))`, so trials are independent of
/// execution order and the latent-amplitude draws of the matrix pipeline
/// never perturb the channel-dynamics stream.
#[derive(Debug, Clone)]
pub struct EpisodeRng {
    /// Initial state and channel transitions.
    pub dynamics: ChaCha12Rng,
    /// Latent amplitudes (matrix pipeline only).
    pub latent: ChaCha12Rng,
}

impl EpisodeRng {
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        let stream = |domain: u64| {
            let word = splitmix64(seed ^ splitmix64(trial.wrapping_mul(2).wrapping_add(domain)));
            ChaCha12Rng::seed_from_u64(word)
        };
        Self {
            dynamics: stream(0),
            latent: stream(1),
        }
    }
}

/// Support-level sensing: the exact busy pattern when the busy count is
/// within the recovery threshold, an erasure otherwise.
fn sense_abstract(state: &StateVector, action: &Action, k: usize) -> SenseOutcome {
    let gamma = threshold_gamma(action.len(), k);
    if state.busy_count(action.indices()) <= gamma {
        SenseOutcome::Recovered(state.restrict(action.indices()))
    } else {
        SenseOutcome::Erasure
    }
}

/// Runs one episode and returns its total reward.
pub fn run_episode(config: &ExperimentConfig, rng: &mut EpisodeRng) -> Result<u32> {
    config.validate()?;
    let matrix = config
        .use_sensing_frontend
        .then(|| build_vandermonde(config.k, config.n));

    let mut state = sample_initial_state(&config.params, &mut rng.dynamics)?;
    let mut beliefs = initial_beliefs(&config.params)?;
    let mut total = 0u32;
    for _ in 0..config.horizon {
        let action = select_action(config.policy, &beliefs, config.k, config.kind)?;
        let outcome = match &matrix {
            None => sense_abstract(&state, &action, config.k),
            Some(m) => {
                let alpha = sample_latent(&state, DEFAULT_ALPHA_FLOOR, &mut rng.latent)?;
                let theta = observe(m, &action, &alpha);
                l0_recover(&theta, m, &action, config.k)?
            }
        };
        total += realized_reward(&state, &action, &outcome, config.kind)?;
        beliefs = update_beliefs(&beliefs, &action, &outcome, &config.params)?;
        state = step_state(&state, &config.params, &mut rng.dynamics);
    }
    Ok(total)
}

/// Runs all trials of an experiment and aggregates the normalized reward.
///
/// Trials run in parallel; totals are collected in trial order and reduced
/// serially, so the result does not depend on thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<TrialStats> {
    config.validate()?;
    let totals: Vec<u32> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = EpisodeRng::for_trial(config.seed, trial as u64);
            run_episode(config, &mut rng)
        })
        .collect::<Result<_>>()?;

    let t = config.horizon as f64;
    let sum: u64 = totals.iter().map(|&x| x as u64).sum();
    let mean = sum as f64 / config.trials as f64 / t;
    let std_error = if config.trials < 2 {
        0.0
    } else {
        let var = totals
            .iter()
            .map(|&x| {
                let d = x as f64 / t - mean;
                d * d
            })
            .sum::<f64>()
            / (config.trials - 1) as f64;
        (var / config.trials as f64).sqrt()
    };
    Ok(TrialStats {
        mean_normalized_reward: mean,
        std_error,
        per_trial_totals: totals,
    })
}

/// One output row of an experiment grid.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    /// Benchmark case label (1 or 2) when the row comes from the built-in
    /// grid; absent for ad-hoc runs.
    pub case: Option<u8>,
    pub n: usize,
    pub k: usize,
    pub policy: PolicySpec,
    pub reward_kind: RewardKind,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean_normalized_reward: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trial_totals: Option<Vec<u32>>,
}

impl SweepRow {
    /// Runs `config` and labels the result.
    pub fn from_experiment(case: Option<u8>, config: &ExperimentConfig) -> Result<Self> {
        let stats = run_experiment(config)?;
        Ok(Self {
            case,
            n: config.n,
            k: config.k,
            policy: config.policy,
            reward_kind: config.kind,
            t: config.horizon,
            trials: config.trials,
            seed: config.seed,
            mean_normalized_reward: stats.mean_normalized_reward,
            std_error: stats.std_error,
            per_trial_totals: Some(stats.per_trial_totals),
        })
    }
}

/// CSV header used by every experiment output.
pub const CSV_HEADER: &str =
    "case,N,K,policy,reward_kind,T,trials,seed,mean_normalized_reward,std_error";

/// Writes rows in the fixed CSV schema (header row, comma separators,
/// `.` decimal marks). Per-trial totals are not part of the schema.
pub fn write_rows_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let case = r.case.map(|c| c.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{case},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.k,
            r.policy,
            r.reward_kind,
            r.t,
            r.trials,
            r.seed,
            r.mean_normalized_reward,
            r.std_error
        )?;
    }
    Ok(())
}

/// Writes rows as a JSON array mirroring the CSV fields; per-trial totals
/// are included only when `include_per_trial` is set.
pub fn write_rows_json<W: Write>(
    rows: &[SweepRow],
    include_per_trial: bool,
    mut out: W,
) -> Result<()> {
    let slim: Vec<SweepRow> = rows
        .iter()
        .map(|r| SweepRow {
            per_trial_totals: if include_per_trial {
                r.per_trial_totals.clone()
            } else {
                None
            },
            ..r.clone()
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &slim)
        .map_err(|e| Error::InvalidConfig(format!("json serialization failed: {e}")))?;
    writeln!(out)?;
    Ok(())
}

/// Homogeneous channel parameters of the two built-in benchmark cases:
/// case 1 is `p00 = 0.82, p10 = 0.42` (30% occupancy at the stationary
/// law), case 2 is `p00 = 0.9, p10 = 0.4` (20% occupancy).
pub fn case_params(case: u8, n: usize) -> Result<ChannelParams> {
    match case {
        1 => ChannelParams::homogeneous(n, 0.82, 0.42),
        2 => ChannelParams::homogeneous(n, 0.9, 0.4),
        other => Err(Error::InvalidConfig(format!(
            "unknown case {other}; expected 1 or 2"
        ))),
    }
}

/// Runs the built-in throughput comparison grid for one benchmark case:
/// for every N in `n_range` and K in `k_values`, the CCS myopic policy and
/// plain K-arm selection under the idle collector. One row per
/// (N, K, policy).
pub fn reproduce_fig2(
    case: u8,
    k_values: &[usize],
    n_range: RangeInclusive<usize>,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for n in n_range {
        for &k in k_values {
            for policy in [PolicySpec::MyopicCcsIdle, PolicySpec::KArm] {
                let config = ExperimentConfig {
                    n,
                    k,
                    horizon,
                    params: case_params(case, n)?,
                    policy,
                    kind: RewardKind::Idle,
                    trials,
                    seed,
                    use_sensing_frontend: false,
                };
                rows.push(SweepRow::from_experiment(Some(case), &config)?);
            }
        }
    }
    Ok(rows)
}
