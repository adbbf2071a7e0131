//! Ground-truth channel dynamics.
//!
//! Each of the N sub-channels is an independent two-state Markov chain over
//! {idle = 0, busy = 1} with transition probabilities
//!
//! ```text
//!   p00 = Pr(idle -> idle),   p01 = 1 - p00,
//!   p10 = Pr(busy -> idle),   p11 = 1 - p10,
//! ```
//!
//! and stationary idle probability `omega_o = p10 / (p01 + p10)`. Channels
//! may carry heterogeneous parameters; the homogeneous case is a convenience
//! constructor.

use rand::Rng;

use crate::error::{Error, Result};

/// Transition probabilities of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Transitions {
    p00: f64,
    p10: f64,
}

/// Per-channel Markov transition probabilities for the whole band.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    channels: Vec<Transitions>,
}

impl ChannelParams {
    /// All channels share the same `(p00, p10)` pair.
    pub fn homogeneous(n: usize, p00: f64, p10: f64) -> Result<Self> {
        Self::heterogeneous(&vec![(p00, p10); n])
    }

    /// One `(p00, p10)` pair per channel.
    pub fn heterogeneous(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParams("need at least one channel".into()));
        }
        for (i, &(p00, p10)) in pairs.iter().enumerate() {
            for (name, p) in [("p00", p00), ("p10", p10)] {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParams(format!(
                        "channel {i}: {name} = {p} is not a probability"
                    )));
                }
            }
        }
        Ok(Self {
            channels: pairs
                .iter()
                .map(|&(p00, p10)| Transitions { p00, p10 })
                .collect(),
        })
    }

    /// Parses the heterogeneous parameter file format: one channel per line,
    /// `p00 p10`, whitespace-separated. Blank lines are ignored.
    pub fn parse_params_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::InvalidParams(format!(
                    "line {}: expected exactly two fields `p00 p10`",
                    lineno + 1
                )));
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidParams(format!("line {}: `{s}` is not a number", lineno + 1))
                })
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        Self::heterogeneous(&pairs)
    }

    /// Number of channels N.
    pub fn n(&self) -> usize {
        self.channels.len()
    }

    pub fn p00(&self, channel: usize) -> f64 {
        self.channels[channel].p00
    }

    pub fn p10(&self, channel: usize) -> f64 {
        self.channels[channel].p10
    }

    pub fn p01(&self, channel: usize) -> f64 {
        1.0 - self.channels[channel].p00
    }

    pub fn p11(&self, channel: usize) -> f64 {
        1.0 - self.channels[channel].p10
    }
}

/// Joint state of the band: `busy[i]` is true when channel `i` is occupied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    busy: Vec<bool>,
}

impl StateVector {
    pub fn new(busy: Vec<bool>) -> Self {
        Self { busy }
    }

    pub fn n(&self) -> usize {
        self.busy.len()
    }

    pub fn is_busy(&self, channel: usize) -> bool {
        self.busy[channel]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.busy
    }

    /// Busy flags of the channels in `set`, in the order given.
    pub fn restrict(&self, set: &[usize]) -> Vec<bool> {
        set.iter().map(|&i| self.busy[i]).collect()
    }

    pub fn busy_count(&self, set: &[usize]) -> usize {
        set.iter().filter(|&&i| self.busy[i]).count()
    }
}

/// Stationary idle probability `p10 / (p01 + p10)` per channel.
///
/// Fails on channels with `p01 = p10 = 0`, which are absorbing in both
/// states and have no unique stationary law.
pub fn stationary_idle_prob(params: &ChannelParams) -> Result<Vec<f64>> {
    (0..params.n())
        .map(|i| {
            let denom = params.p01(i) + params.p10(i);
            if denom == 0.0 {
                Err(Error::DegenerateChannel { channel: i })
            } else {
                Ok(params.p10(i) / denom)
            }
        })
        .collect()
}

/// Advances every channel one slot: from idle stay idle with probability
/// `p00`, from busy turn idle with probability `p10`.
///
/// Exactly one uniform draw is consumed per channel, so two policies driven
/// by clones of the same stream see identical state trajectories.
pub fn step_state<R: Rng + ?Sized>(
    state: &StateVector,
    params: &ChannelParams,
    rng: &mut R,
) -> StateVector {
    assert_eq!(state.n(), params.n(), "state/params length mismatch");
    let busy = (0..params.n())
        .map(|i| {
            let idle_prob = if state.is_busy(i) {
                params.p10(i)
            } else {
                params.p00(i)
            };
            rng.random::<f64>() >= idle_prob
        })
        .collect();
    StateVector::new(busy)
}

/// Draws an initial state from the stationary law: channel `i` idle with
/// probability `omega_o,i`.
pub fn sample_initial_state<R: Rng + ?Sized>(
    params: &ChannelParams,
    rng: &mut R,
) -> Result<StateVector> {
    let omega = stationary_idle_prob(params)?;
    let busy = omega.iter().map(|&w| rng.random::<f64>() >= w).collect();
    Ok(StateVector::new(busy))
}
