//! Belief-state tracking.
//!
//! The belief vector `Omega[t]` holds, per channel, the conditional
//! probability of being idle given all past actions and recovered supports;
//! it is the sufficient statistic of the partially observable decision
//! process. After sensing a set A, each entry updates by one of four cases:
//!
//! ```text
//!   i in A, support recovered, s_i = 1  ->  p10
//!   i in A, support recovered, s_i = 0  ->  p00
//!   i in A, erasure                     ->  tau(omega_i)
//!   i not in A                          ->  tau(omega_i)
//! ```
//!
//! where `tau(omega) = omega * p00 + (1 - omega) * p10` is the one-step
//! prior propagation. An erasure carries no information, so sensed and
//! unsensed channels propagate identically. When `|A| = K` the support is
//! always recovered and the erasure arm is unreachable.

use crate::channel::{stationary_idle_prob, ChannelParams};
use crate::error::{Error, Result};
use crate::policy::Action;

/// Per-channel probability of being idle.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefVector {
    omega: Vec<f64>,
}

impl BeliefVector {
    /// Validates that every entry is a probability.
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidParams(
                "belief vector must be non-empty".into(),
            ));
        }
        for (i, &w) in omega.iter().enumerate() {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidBelief {
                    channel: i,
                    value: w,
                });
            }
        }
        Ok(Self { omega })
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn get(&self, channel: usize) -> f64 {
        self.omega[channel]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.omega
    }
}

impl std::ops::Index<usize> for BeliefVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.omega[i]
    }
}

/// What the collector learned from one sensing action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SenseOutcome {
    /// The busy/idle pattern of the sensed set, aligned with the action's
    /// sorted indices (`true` = busy). Only produced when the busy count is
    /// within the recovery threshold.
    Recovered(Vec<bool>),
    /// Too many busy channels for unique recovery: no reward, no information.
    Erasure,
}

/// One-step prior propagation `tau(omega) = omega * p00 + (1 - omega) * p10`.
///
/// The result always lies between `min(p00, p10)` and `max(p00, p10)`, and
/// the stationary idle probability is its fixed point.
pub fn tau(omega: f64, p00: f64, p10: f64) -> f64 {
    omega * p00 + (1.0 - omega) * p10
}

/// Beliefs with no observation history: the stationary idle probabilities.
pub fn initial_beliefs(params: &ChannelParams) -> Result<BeliefVector> {
    BeliefVector::new(stationary_idle_prob(params)?)
}

/// Applies the four-case update for action `action` and outcome `outcome`.
pub fn update_beliefs(
    beliefs: &BeliefVector,
    action: &Action,
    outcome: &SenseOutcome,
    params: &ChannelParams,
) -> Result<BeliefVector> {
    let n = beliefs.n();
    if params.n() != n {
        return Err(Error::InvalidParams(format!(
            "params cover {} channels, beliefs cover {n}",
            params.n()
        )));
    }
    action.check_bounds(n)?;

    let mut next = Vec::with_capacity(n);
    match outcome {
        SenseOutcome::Recovered(support) => {
            if support.len() != action.len() {
                return Err(Error::InconsistentOutcome(format!(
                    "support has {} entries for an action of size {}",
                    support.len(),
                    action.len()
                )));
            }
            let busy = support.iter().filter(|&&b| b).count();
            if busy > action.gamma() {
                return Err(Error::InconsistentOutcome(format!(
                    "recovered support has {busy} busy channels, above the threshold {}",
                    action.gamma()
                )));
            }
            let mut in_action = vec![None; n];
            for (pos, &i) in action.indices().iter().enumerate() {
                in_action[i] = Some(support[pos]);
            }
            for i in 0..n {
                next.push(match in_action[i] {
                    Some(true) => params.p10(i),
                    Some(false) => params.p00(i),
                    None => tau(beliefs[i], params.p00(i), params.p10(i)),
                });
            }
        }
        SenseOutcome::Erasure => {
            // With |A| = K the busy count can never exceed the threshold, so
            // an erasure there is a caller bug, not a probabilistic event.
            if action.len() <= action.k() {
                return Err(Error::InconsistentOutcome(format!(
                    "erasure reported for an action of size {} with K = {}: \
                     recovery is certain at |A| = K",
                    action.len(),
                    action.k()
                )));
            }
            for i in 0..n {
                next.push(tau(beliefs[i], params.p00(i), params.p10(i)));
            }
        }
    }
    BeliefVector::new(next)
}
