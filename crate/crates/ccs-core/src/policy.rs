//! Action selection.
//!
//! With beliefs sorted descending, `A^(M)` denotes the prefix of the `M`
//! highest-belief channels. For the idle collector the myopic optimum is
//! always one of these prefixes, so the optimal myopic policy just scans
//! `M = K..N` — one expected-reward evaluation per prefix, no subset
//! enumeration. The greedy variant walks the same chain and stops at the
//! first negative marginal; when the boundary PMF value is non-decreasing
//! along the chain the two coincide.
//!
//! The busy collector has no such structure, so its myopic policy is an
//! explicit exhaustive search with a hard size cap. A brute-force oracle
//! (argmax over all subsets, with enumeration-based expected rewards) and a
//! tiny exact dynamic program are included for validation.

use std::collections::HashMap;

use itertools::Itertools;

use crate::belief::{update_beliefs, BeliefVector, SenseOutcome};
use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::reward::{expected_reward, marginal_expected_reward_idle, RewardKind};
use crate::support::{erasure_prob, sorted_indices_desc, threshold_gamma};

/// A sensing action: a sorted set of channel indices with `K <= |A| <= N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    indices: Vec<usize>,
    k: usize,
}

impl Action {
    /// Validates cardinality, range and distinctness; stores the indices
    /// sorted ascending.
    pub fn new(mut indices: Vec<usize>, k: usize, n: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidAction(format!(
                "sensing budget K = {k} must satisfy 1 <= K <= N = {n}"
            )));
        }
        if indices.len() < k || indices.len() > n {
            return Err(Error::InvalidAction(format!(
                "action size {} outside K..=N = {k}..={n}",
                indices.len()
            )));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidAction("duplicate channel index".into()));
        }
        if *indices.last().unwrap() >= n {
            return Err(Error::InvalidAction(format!(
                "channel index {} out of range for N = {n}",
                indices.last().unwrap()
            )));
        }
        Ok(Self { indices, k })
    }

    /// Sorted channel indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Sensing budget the action was validated against.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Recovery threshold of this action.
    pub fn gamma(&self) -> usize {
        threshold_gamma(self.len(), self.k)
    }

    pub(crate) fn check_bounds(&self, n: usize) -> Result<()> {
        if self.indices.last().is_some_and(|&i| i >= n) {
            return Err(Error::InvalidAction(format!(
                "action references channel {} but only {n} exist",
                self.indices.last().unwrap()
            )));
        }
        Ok(())
    }
}

/// Available action-selection rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicySpec {
    /// Sense exactly the K highest-belief channels.
    #[serde(rename = "karm")]
    KArm,
    /// Optimal myopic idle-collector action via the prefix scan.
    MyopicCcsIdle,
    /// Greedy prefix growth, stopping at the first negative marginal.
    GreedyCcsIdle,
    /// Exhaustive busy-collector myopic search (capped instance size).
    MyopicCcsBusyExhaustive,
    /// Brute-force argmax with enumeration-based rewards (capped, test oracle).
    Oracle,
}

impl std::fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PolicySpec::KArm => "karm",
            PolicySpec::MyopicCcsIdle => "myopic-ccs-idle",
            PolicySpec::GreedyCcsIdle => "greedy-ccs-idle",
            PolicySpec::MyopicCcsBusyExhaustive => "myopic-ccs-busy-exhaustive",
            PolicySpec::Oracle => "oracle",
        };
        write!(f, "{s}")
    }
}

fn require_n_at_least_k(n: usize, k: usize) -> Result<()> {
    if k < 1 || n < k {
        return Err(Error::InvalidAction(format!(
            "need 1 <= K <= N (got K = {k}, N = {n})"
        )));
    }
    Ok(())
}

/// The K highest-belief channels, ties to the lower index.
pub fn karm_myopic(beliefs: &BeliefVector, k: usize) -> Result<Action> {
    require_n_at_least_k(beliefs.n(), k)?;
    let order = sorted_indices_desc(beliefs);
    Action::new(order[..k].to_vec(), k, beliefs.n())
}

/// Optimal myopic idle-collector action: the best sorted prefix `A^(M)`,
/// `M = K..N`, ties resolved toward the smaller prefix (lower erasure risk).
pub fn ccs_myopic_idle(beliefs: &BeliefVector, k: usize) -> Result<Action> {
    Ok(ccs_myopic_idle_with_stats(beliefs, k)?.0)
}

/// [`ccs_myopic_idle`] plus the number of expected-reward evaluations it
/// performed — exactly `N - K + 1` by construction.
pub fn ccs_myopic_idle_with_stats(beliefs: &BeliefVector, k: usize) -> Result<(Action, usize)> {
    let n = beliefs.n();
    require_n_at_least_k(n, k)?;
    let order = sorted_indices_desc(beliefs);
    let mut evals = 0usize;
    let mut best_m = k;
    let mut best = f64::NEG_INFINITY;
    for m in k..=n {
        let e = expected_reward(beliefs, &order[..m], k, RewardKind::Idle)?;
        evals += 1;
        if e > best {
            best = e;
            best_m = m;
        }
    }
    Ok((Action::new(order[..best_m].to_vec(), k, n)?, evals))
}

/// Greedy prefix growth: start at `A^(K)`, keep adding the next-best channel
/// while the marginal expected reward stays non-negative, stop at the first
/// negative one.
pub fn greedy_myopic_idle(beliefs: &BeliefVector, k: usize) -> Result<Action> {
    let n = beliefs.n();
    require_n_at_least_k(n, k)?;
    let order = sorted_indices_desc(beliefs);
    let mut size = k;
    while size < n {
        let marginal = marginal_expected_reward_idle(beliefs, &order[..size], order[size], k)?;
        if marginal < 0.0 {
            break;
        }
        size += 1;
    }
    Action::new(order[..size].to_vec(), k, n)
}

/// Every subset of `0..n` with cardinality in `k..=n`, smaller sizes first,
/// lexicographic within a size — the tie-break order for exhaustive argmax.
fn subsets_by_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (k..=n).flat_map(move |m| (0..n).combinations(m))
}

/// Exhaustive busy-collector myopic policy.
///
/// There is no prefix structure to exploit for the busy collector, so every
/// subset with `K <= |A| <= N` is scored; instances above `size_limit`
/// channels are refused rather than approximated.
pub fn ccs_myopic_busy_exhaustive(
    beliefs: &BeliefVector,
    k: usize,
    size_limit: usize,
) -> Result<Action> {
    let n = beliefs.n();
    require_n_at_least_k(n, k)?;
    if n > size_limit {
        return Err(Error::TooLarge(format!(
            "busy-collector myopic search is exhaustive; N = {n} exceeds the cap {size_limit}"
        )));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for set in subsets_by_size(n, k) {
        let e = expected_reward(beliefs, &set, k, RewardKind::Busy)?;
        if best.as_ref().is_none_or(|(b, _)| e > *b) {
            best = Some((e, set));
        }
    }
    Action::new(best.expect("k..=n is non-empty").1, k, n)
}

/// Default instance cap for [`ccs_myopic_busy_exhaustive`].
pub const BUSY_EXHAUSTIVE_SIZE_LIMIT: usize = 20;

/// Expected reward by direct enumeration of all busy/idle configurations of
/// the sensed set, gated by the recovery threshold. Independent of the
/// convolution-based path; exponential in `|set|`.
fn enumerated_expected_reward(
    beliefs: &BeliefVector,
    set: &[usize],
    k: usize,
    kind: RewardKind,
) -> f64 {
    let m = set.len();
    let gamma = threshold_gamma(m, k);
    let mut total = 0.0;
    for mask in 0u32..(1u32 << m) {
        let mut w = 1.0;
        let mut busy = 0usize;
        for (pos, &i) in set.iter().enumerate() {
            if mask >> pos & 1 == 1 {
                w *= 1.0 - beliefs[i];
                busy += 1;
            } else {
                w *= beliefs[i];
            }
        }
        if busy <= gamma {
            let r = match kind {
                RewardKind::Idle => m - busy,
                RewardKind::Busy => busy,
            };
            total += w * r as f64;
        }
    }
    total
}

/// Brute-force myopic argmax over all valid actions, with expected rewards
/// computed by exhaustive enumeration. A test oracle; capped at N <= 12.
pub fn myopic_oracle_bruteforce(
    beliefs: &BeliefVector,
    k: usize,
    kind: RewardKind,
) -> Result<Action> {
    let n = beliefs.n();
    require_n_at_least_k(n, k)?;
    if n > 12 {
        return Err(Error::TooLarge(format!(
            "brute-force oracle enumerates 2^N supports; N = {n} exceeds 12"
        )));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for set in subsets_by_size(n, k) {
        let e = enumerated_expected_reward(beliefs, &set, k, kind);
        if best.as_ref().is_none_or(|(b, _)| e > *b) {
            best = Some((e, set));
        }
    }
    Action::new(best.expect("k..=n is non-empty").1, k, n)
}

/// Dispatches a policy specification to its selection rule.
pub fn select_action(
    spec: PolicySpec,
    beliefs: &BeliefVector,
    k: usize,
    kind: RewardKind,
) -> Result<Action> {
    match spec {
        PolicySpec::KArm => karm_myopic(beliefs, k),
        PolicySpec::MyopicCcsIdle => ccs_myopic_idle(beliefs, k),
        PolicySpec::GreedyCcsIdle => greedy_myopic_idle(beliefs, k),
        PolicySpec::MyopicCcsBusyExhaustive => {
            ccs_myopic_busy_exhaustive(beliefs, k, BUSY_EXHAUSTIVE_SIZE_LIMIT)
        }
        PolicySpec::Oracle => myopic_oracle_bruteforce(beliefs, k, kind),
    }
}

/// Hard caps for the exact dynamic program: the outcome tree branches over
/// all actions and all recoverable supports per slot.
const DP_MAX_N: usize = 4;
const DP_MAX_HORIZON: usize = 4;

fn check_dp_size(n: usize, horizon: usize) -> Result<()> {
    if n > DP_MAX_N || horizon > DP_MAX_HORIZON {
        return Err(Error::TooLarge(format!(
            "exact dynamic program is capped at N <= {DP_MAX_N}, horizon <= {DP_MAX_HORIZON} \
             (got N = {n}, horizon = {horizon})"
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidConfig("horizon must be at least 1".into()));
    }
    Ok(())
}

/// Optimal expected total reward over `horizon` slots from `beliefs`,
/// by exact expectimax over actions and observable supports.
///
/// Each action branches on every recoverable support (probability-weighted,
/// beliefs pinned to the observed pattern) plus a single erasure branch with
/// probability `rho_A` whose successor propagates every channel through tau.
/// Only tiny instances are accepted; see [`exact_policy_value`] for the
/// matching policy-evaluation form.
pub fn exact_value_function(
    beliefs: &BeliefVector,
    k: usize,
    horizon: usize,
    kind: RewardKind,
    params: &ChannelParams,
) -> Result<f64> {
    let n = beliefs.n();
    require_n_at_least_k(n, k)?;
    check_dp_size(n, horizon)?;
    if params.n() != n {
        return Err(Error::InvalidConfig(format!(
            "params cover {} channels, beliefs cover {n}",
            params.n()
        )));
    }
    let mut memo = HashMap::new();
    value_rec(beliefs, k, horizon, kind, params, None, &mut memo)
}

/// Expected total reward of following a fixed policy for `horizon` slots,
/// evaluated exactly over the same outcome tree as [`exact_value_function`].
pub fn exact_policy_value(
    beliefs: &BeliefVector,
    k: usize,
    horizon: usize,
    kind: RewardKind,
    params: &ChannelParams,
    policy: PolicySpec,
) -> Result<f64> {
    let n = beliefs.n();
    require_n_at_least_k(n, k)?;
    check_dp_size(n, horizon)?;
    if params.n() != n {
        return Err(Error::InvalidConfig(format!(
            "params cover {} channels, beliefs cover {n}",
            params.n()
        )));
    }
    let mut memo = HashMap::new();
    value_rec(beliefs, k, horizon, kind, params, Some(policy), &mut memo)
}

type Memo = HashMap<(usize, Vec<u64>), f64>;

fn memo_key(beliefs: &BeliefVector, horizon: usize) -> (usize, Vec<u64>) {
    (
        horizon,
        beliefs.as_slice().iter().map(|w| w.to_bits()).collect(),
    )
}

/// Shared recursion: maximizes over actions when `policy` is `None`,
/// otherwise follows the given policy.
fn value_rec(
    beliefs: &BeliefVector,
    k: usize,
    horizon: usize,
    kind: RewardKind,
    params: &ChannelParams,
    policy: Option<PolicySpec>,
    memo: &mut Memo,
) -> Result<f64> {
    let key = memo_key(beliefs, horizon);
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    let n = beliefs.n();
    let candidates: Vec<Action> = match policy {
        Some(spec) => vec![select_action(spec, beliefs, k, kind)?],
        None => subsets_by_size(n, k)
            .map(|set| Action::new(set, k, n))
            .collect::<Result<_>>()?,
    };

    let mut best = f64::NEG_INFINITY;
    for action in &candidates {
        let set = action.indices();
        let mut total = expected_reward(beliefs, set, k, kind)?;
        if horizon > 1 {
            let gamma = action.gamma();
            let m = set.len();
            for mask in 0u32..(1u32 << m) {
                if (mask.count_ones() as usize) > gamma {
                    continue;
                }
                let support: Vec<bool> = (0..m).map(|pos| mask >> pos & 1 == 1).collect();
                let mut prob = 1.0;
                for (pos, &i) in set.iter().enumerate() {
                    prob *= if support[pos] {
                        1.0 - beliefs[i]
                    } else {
                        beliefs[i]
                    };
                }
                if prob == 0.0 {
                    continue;
                }
                let next =
                    update_beliefs(beliefs, action, &SenseOutcome::Recovered(support), params)?;
                total += prob * value_rec(&next, k, horizon - 1, kind, params, policy, memo)?;
            }
            let rho = erasure_prob(beliefs, set, k)?;
            if rho > 0.0 {
                let next = update_beliefs(beliefs, action, &SenseOutcome::Erasure, params)?;
                total += rho * value_rec(&next, k, horizon - 1, kind, params, policy, memo)?;
            }
        }
        if total > best {
            best = total;
        }
    }
    memo.insert(key, best);
    Ok(best)
}
