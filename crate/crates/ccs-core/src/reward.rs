//! Realized and expected rewards for both collector types.
//!
//! The idle collector earns one unit per sensed channel identified as idle,
//! the busy collector one unit per sensed channel identified as busy. Both
//! earn nothing on an erasure. With leave-one-out busy counts this gives the
//! closed forms
//!
//! ```text
//!   idle:  E[R_A] = sum_{i in A} omega_i * F_{A-i}(Gamma_A)
//!   busy:  E[R_A] = |A| * (1 - rho_A) - sum_{i in A} omega_i * F_{A-i}(Gamma_A)
//! ```
//!
//! where `F_{A-i}` is the busy-count CDF of the set without channel `i`.
//! The idle marginal `E[R_{A+a}] - E[R_A]` also has closed forms, split at
//! the threshold discontinuity `|A| = K`:
//!
//! ```text
//!   |A| = K:  omega_a * F_A(g) - sum_{i in A} omega_i * Fc_{A+a-i}(g)
//!   |A| > K:  omega_a * (1 - rho_A)
//!               - (1 - omega_a) * sum_{i in A} omega_i * P_{A-i}(g)
//! ```
//!
//! with `g = ceil(K/2) - 1`. The busy-collector reward has no such
//! structure, so no marginal shortcut exists for it.

use crate::belief::{BeliefVector, SenseOutcome};
use crate::channel::StateVector;
use crate::error::{Error, Result};
use crate::policy::Action;
use crate::support::{check_set, erasure_prob, support_pmf, threshold_gamma};

/// Which channel state the collector is paid for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardKind {
    Idle,
    Busy,
}

impl std::fmt::Display for RewardKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RewardKind::Idle => write!(f, "idle"),
            RewardKind::Busy => write!(f, "busy"),
        }
    }
}

/// Reward actually collected in one slot: zero on erasure, otherwise the
/// count of idle (resp. busy) channels inside the sensed set.
///
/// A recovered support must equal the true state restricted to the action.
pub fn realized_reward(
    state: &StateVector,
    action: &Action,
    outcome: &SenseOutcome,
    kind: RewardKind,
) -> Result<u32> {
    action.check_bounds(state.n())?;
    match outcome {
        SenseOutcome::Erasure => Ok(0),
        SenseOutcome::Recovered(support) => {
            if *support != state.restrict(action.indices()) {
                return Err(Error::InconsistentOutcome(
                    "recovered support disagrees with the true state on the sensed set".into(),
                ));
            }
            let busy = support.iter().filter(|&&b| b).count() as u32;
            Ok(match kind {
                RewardKind::Idle => support.len() as u32 - busy,
                RewardKind::Busy => busy,
            })
        }
    }
}

/// Leave-one-out CDF values `F_{A-i}(cap)` for every `i` in the set,
/// via prefix/suffix convolutions truncated at `cap`.
///
/// Returns, per position, the probability that the busy count of the set
/// without that element is at most `cap`. `cap = -1` yields zeros.
fn leave_one_out_cdfs(beliefs: &BeliefVector, set: &[usize], cap: isize) -> Vec<f64> {
    let m = set.len();
    if cap < 0 {
        return vec![0.0; m];
    }
    let cap = cap as usize;
    let trunc = |p: &mut Vec<f64>| {
        if p.len() > cap + 1 {
            p.truncate(cap + 1);
        }
    };
    // prefix[j]: truncated busy-count PMF of set[..j]; suffix[j]: of set[j..].
    let mut prefix: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    prefix.push(vec![1.0]);
    for j in 0..m {
        let q = 1.0 - beliefs[set[j]];
        let mut next = convolve_bernoulli(&prefix[j], q);
        trunc(&mut next);
        prefix.push(next);
    }
    let mut suffix: Vec<Vec<f64>> = vec![vec![1.0]; m + 1];
    for j in (0..m).rev() {
        let q = 1.0 - beliefs[set[j]];
        let mut next = convolve_bernoulli(&suffix[j + 1], q);
        trunc(&mut next);
        suffix[j] = next;
    }
    (0..m)
        .map(|i| {
            let (a, b) = (&prefix[i], &suffix[i + 1]);
            let mut cdf = 0.0;
            for (ka, &pa) in a.iter().enumerate() {
                if ka > cap {
                    break;
                }
                for (kb, &pb) in b.iter().enumerate() {
                    if ka + kb > cap {
                        break;
                    }
                    cdf += pa * pb;
                }
            }
            cdf
        })
        .collect()
}

fn convolve_bernoulli(p: &[f64], q: f64) -> Vec<f64> {
    let mut next = vec![0.0; p.len() + 1];
    for (k, &pk) in p.iter().enumerate() {
        next[k] += pk * (1.0 - q);
        next[k + 1] += pk * q;
    }
    next
}

/// Expected one-slot reward of sensing `set` under the current beliefs.
pub fn expected_reward(
    beliefs: &BeliefVector,
    set: &[usize],
    k: usize,
    kind: RewardKind,
) -> Result<f64> {
    check_set(beliefs, set)?;
    if set.len() < k {
        return Err(Error::InvalidAction(format!(
            "expected reward needs K <= |A| (got |A| = {}, K = {k})",
            set.len()
        )));
    }
    let gamma = threshold_gamma(set.len(), k) as isize;
    let cdfs = leave_one_out_cdfs(beliefs, set, gamma);
    let idle_term: f64 = set.iter().zip(&cdfs).map(|(&i, &f)| beliefs[i] * f).sum();
    match kind {
        RewardKind::Idle => Ok(idle_term),
        RewardKind::Busy => {
            let rho = erasure_prob(beliefs, set, k)?;
            Ok(set.len() as f64 * (1.0 - rho) - idle_term)
        }
    }
}

/// Idle-collector marginal `E[R_{A+a}] - E[R_A]` by the closed forms.
pub fn marginal_expected_reward_idle(
    beliefs: &BeliefVector,
    set: &[usize],
    a: usize,
    k: usize,
) -> Result<f64> {
    check_set(beliefs, set)?;
    if set.len() < k {
        return Err(Error::InvalidAction(format!(
            "marginal reward needs K <= |A| (got |A| = {}, K = {k})",
            set.len()
        )));
    }
    if set.contains(&a) {
        return Err(Error::InvalidAction(format!(
            "candidate {a} already in the set"
        )));
    }
    if a >= beliefs.n() {
        return Err(Error::InvalidAction(format!(
            "candidate {a} out of range for {} channels",
            beliefs.n()
        )));
    }
    let gamma_grown = threshold_gamma(set.len() + 1, k) as isize;
    if set.len() == k {
        // Crossing the threshold discontinuity: the grown set's CDFs all sit
        // at gamma = ceil(K/2) - 1 while the base set still recovers surely.
        let f_a = support_pmf(beliefs, set)?.cdf(gamma_grown.max(0) as usize);
        let mut grown = set.to_vec();
        grown.push(a);
        let cdfs = leave_one_out_cdfs(beliefs, &grown, gamma_grown);
        let loss: f64 = grown
            .iter()
            .zip(&cdfs)
            .filter(|(&i, _)| i != a)
            .map(|(&i, &f)| beliefs[i] * (1.0 - f))
            .sum();
        Ok(beliefs[a] * f_a - loss)
    } else {
        let rho = erasure_prob(beliefs, set, k)?;
        let pmfs_at_gamma = leave_one_out_pmf_at(beliefs, set, gamma_grown as usize);
        let shrink: f64 = set
            .iter()
            .zip(&pmfs_at_gamma)
            .map(|(&i, &p)| beliefs[i] * p)
            .sum();
        Ok(beliefs[a] * (1.0 - rho) - (1.0 - beliefs[a]) * shrink)
    }
}

/// Leave-one-out PMF values `P_{A-i}(exactly k)` per position.
fn leave_one_out_pmf_at(beliefs: &BeliefVector, set: &[usize], k: usize) -> Vec<f64> {
    let at = leave_one_out_cdfs(beliefs, set, k as isize);
    if k == 0 {
        return at;
    }
    let below = leave_one_out_cdfs(beliefs, set, k as isize - 1);
    at.iter().zip(&below).map(|(&a, &b)| a - b).collect()
}
