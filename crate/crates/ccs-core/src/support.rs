//! Distribution of the busy count of a sensed set.
//!
//! Under the belief vector, channel `i` is busy independently with
//! probability `1 - omega_i`, so the busy count `||s_A||_1` of a set A is
//! Poisson-binomial. Everything the collector needs derives from it:
//!
//! * the integer recovery threshold
//!   `Gamma_A = |A|` for `|A| <= K`, else `ceil(K/2) - 1`;
//! * the erasure probability `rho_A = Pr(||s_A||_1 > Gamma_A)`, which is 0
//!   for `|A| <= K`;
//! * marginal erasure increments
//!   `rho_{A+a} - rho_A = (1 - omega_a) * P_A(Gamma_A)` for `|A| > K`;
//! * monotone-PMF conditions under which the erasure probability is
//!   super-modular and the greedy policy is optimal.
//!
//! The PMF is computed by exact O(|A|^2) convolution; truncated prefix sums
//! recover every CDF the formulas need. No approximation is used anywhere.

use itertools::Itertools;

use crate::belief::BeliefVector;
use crate::error::{Error, Result};

/// PMF of the busy count of a specific index set, indexed k = 0..=|A|.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPmf {
    set: Vec<usize>,
    probs: Vec<f64>,
}

impl SupportPmf {
    /// The set the distribution describes.
    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// `Pr(||s_A||_1 = k)`; zero outside 0..=|A|.
    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    /// `Pr(||s_A||_1 <= k)`.
    pub fn cdf(&self, k: usize) -> f64 {
        self.probs.iter().take(k + 1).sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }
}

/// Maximum busy count that still permits unique support recovery:
/// `|A|` when the set fits the sensing budget, `ceil(K/2) - 1` beyond it.
pub fn threshold_gamma(set_size: usize, k: usize) -> usize {
    assert!(k >= 1, "sensing budget K must be at least 1");
    if set_size <= k {
        set_size
    } else {
        k.div_ceil(2) - 1
    }
}

/// Busy-count PMF truncated at `cap`: entries k = 0..=min(cap, m).
///
/// Pure convolution of Bernoulli factors; sums and products of
/// non-negative terms only.
fn pmf_truncated(busy_probs: impl Iterator<Item = f64>, cap: usize) -> Vec<f64> {
    let mut p = vec![1.0f64];
    for q in busy_probs {
        let top = (p.len()).min(cap + 1);
        let mut next = vec![0.0f64; (p.len() + 1).min(cap + 1)];
        for k in 0..top {
            next[k] += p[k] * (1.0 - q);
            if k < cap {
                next[k + 1] += p[k] * q;
            }
        }
        p = next;
    }
    p
}

pub(crate) fn check_set(beliefs: &BeliefVector, set: &[usize]) -> Result<()> {
    let n = beliefs.n();
    for &i in set {
        if i >= n {
            return Err(Error::InvalidAction(format!(
                "channel index {i} out of range for {n} channels"
            )));
        }
    }
    if !set.iter().all_unique() {
        return Err(Error::InvalidAction(
            "duplicate channel index in set".into(),
        ));
    }
    Ok(())
}

/// Exact Poisson-binomial PMF of the busy count of `set`.
///
/// The empty set yields the convolution identity, a point mass at zero.
pub fn support_pmf(beliefs: &BeliefVector, set: &[usize]) -> Result<SupportPmf> {
    check_set(beliefs, set)?;
    let probs = pmf_truncated(set.iter().map(|&i| 1.0 - beliefs[i]), set.len());
    Ok(SupportPmf {
        set: set.to_vec(),
        probs,
    })
}

/// Probability that the busy count of `set` exceeds its recovery threshold.
///
/// Zero whenever `|set| = K`; requires `|set| >= K`.
pub fn erasure_prob(beliefs: &BeliefVector, set: &[usize], k: usize) -> Result<f64> {
    check_set(beliefs, set)?;
    if set.len() < k {
        return Err(Error::InvalidAction(format!(
            "erasure probability needs |A| >= K (got |A| = {}, K = {k})",
            set.len()
        )));
    }
    if set.len() <= k {
        return Ok(0.0);
    }
    let gamma = threshold_gamma(set.len(), k);
    let cdf: f64 = pmf_truncated(set.iter().map(|&i| 1.0 - beliefs[i]), gamma)
        .iter()
        .sum();
    Ok(1.0 - cdf)
}

/// Complementary CDF `Pr(||s_set||_1 > x)` where `x` may be -1 (then 1).
fn ccdf(beliefs: &BeliefVector, set: &[usize], x: isize) -> f64 {
    if x < 0 {
        return 1.0;
    }
    let cdf: f64 = pmf_truncated(set.iter().map(|&i| 1.0 - beliefs[i]), x as usize)
        .iter()
        .sum();
    1.0 - cdf
}

/// Erasure probability through the pivot decomposition on `||s_A||_1 =
/// ||s_{A-i}||_1 + s_i`:
///
/// ```text
///   |A| = K    ->  0
///   |A| = K+1  ->  omega_i * Fc_{A-i}(Gamma) + (1 - omega_i) * Fc_{A-i}(Gamma - 1)
///   |A| > K+1  ->  (1 - omega_i) * Fc_{A-i}(Gamma - 1) + omega_i * rho_{A-i}
/// ```
///
/// Agrees with [`erasure_prob`] for every pivot choice; kept as a second,
/// structurally different route for cross-validation.
pub fn erasure_prob_recursive(
    beliefs: &BeliefVector,
    set: &[usize],
    pivot: usize,
    k: usize,
) -> Result<f64> {
    check_set(beliefs, set)?;
    if !set.contains(&pivot) {
        return Err(Error::InvalidAction(format!(
            "pivot {pivot} is not in the set"
        )));
    }
    if set.len() < k {
        return Err(Error::InvalidAction(format!(
            "erasure probability needs |A| >= K (got |A| = {}, K = {k})",
            set.len()
        )));
    }
    Ok(erasure_recursive_inner(beliefs, set, pivot, k))
}

fn erasure_recursive_inner(beliefs: &BeliefVector, set: &[usize], pivot: usize, k: usize) -> f64 {
    if set.len() <= k {
        return 0.0;
    }
    let gamma = threshold_gamma(set.len(), k) as isize;
    let rest: Vec<usize> = set.iter().copied().filter(|&i| i != pivot).collect();
    let w = beliefs[pivot];
    if set.len() == k + 1 {
        w * ccdf(beliefs, &rest, gamma) + (1.0 - w) * ccdf(beliefs, &rest, gamma - 1)
    } else {
        let sub = erasure_recursive_inner(beliefs, &rest, rest[0], k);
        (1.0 - w) * ccdf(beliefs, &rest, gamma - 1) + w * sub
    }
}

/// Marginal erasure increment `rho_{A+a} - rho_A`:
/// the full jump `rho_{A+a}` when `|A| = K`, and
/// `(1 - omega_a) * P_A(Gamma_A)` when `K < |A| <= N-1`.
pub fn erasure_prob_marginal(
    beliefs: &BeliefVector,
    set: &[usize],
    a: usize,
    k: usize,
) -> Result<f64> {
    check_set(beliefs, set)?;
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
    if set.len() < k {
        return Err(Error::InvalidAction(format!(
            "marginal needs |A| >= K (got |A| = {}, K = {k})",
            set.len()
        )));
    }
    if set.len() == k {
        let mut grown = set.to_vec();
        grown.push(a);
        return erasure_prob(beliefs, &grown, k);
    }
    let gamma = threshold_gamma(set.len(), k);
    let pmf = pmf_truncated(set.iter().map(|&i| 1.0 - beliefs[i]), gamma);
    Ok((1.0 - beliefs[a]) * pmf.get(gamma).copied().unwrap_or(0.0))
}

/// Indices sorted by belief descending, ties broken by lower index.
pub fn sorted_indices_desc(beliefs: &BeliefVector) -> Vec<usize> {
    let mut order: Vec<usize> = (0..beliefs.n()).collect();
    order.sort_by(|&a, &b| beliefs[b].partial_cmp(&beliefs[a]).unwrap().then(a.cmp(&b)));
    order
}

/// Checks whether `P_{A^(M)}(Gamma)` is non-decreasing along the
/// sorted-prefix chain `A^(K+1) subset ... subset A^(N)` — the family the
/// greedy policy actually traverses.
///
/// The `M = K` endpoint is excluded: its threshold is `K` rather than
/// `ceil(K/2) - 1`, so a comparison across it would mix two different
/// boundary probabilities.
pub fn check_monotone_pmf_chain(beliefs: &BeliefVector, k: usize) -> bool {
    let n = beliefs.n();
    if n <= k + 1 {
        return true;
    }
    let order = sorted_indices_desc(beliefs);
    let gamma = threshold_gamma(k + 1, k);
    let mut prev = f64::NEG_INFINITY;
    for m in (k + 1)..=n {
        let pmf = pmf_truncated(order[..m].iter().map(|&i| 1.0 - beliefs[i]), gamma);
        let p = pmf.get(gamma).copied().unwrap_or(0.0);
        if p < prev {
            return false;
        }
        prev = p;
    }
    true
}

/// Exhaustive variant of the monotone-PMF condition: checks
/// `P_{S+x}(Gamma) >= P_S(Gamma)` for every subset `S` with
/// `K+1 <= |S| <= N-1` and every candidate `x` outside it.
///
/// Quantifying over all subsets is the strong reading of the hypothesis;
/// it is exponential, so instances are capped at N <= 10.
pub fn check_monotone_pmf_all_subsets(beliefs: &BeliefVector, k: usize) -> Result<bool> {
    let n = beliefs.n();
    if n > 10 {
        return Err(Error::TooLarge(format!(
            "all-subsets monotonicity check is exponential; refused for N = {n} > 10"
        )));
    }
    if n <= k + 1 {
        return Ok(true);
    }
    let gamma = threshold_gamma(k + 1, k);
    let at_gamma = |s: &[usize]| -> f64 {
        pmf_truncated(s.iter().map(|&i| 1.0 - beliefs[i]), gamma)
            .get(gamma)
            .copied()
            .unwrap_or(0.0)
    };
    for size in (k + 1)..n {
        for s in (0..n).combinations(size) {
            let base = at_gamma(&s);
            for x in 0..n {
                if s.contains(&x) {
                    continue;
                }
                let mut grown = s.clone();
                grown.push(x);
                if at_gamma(&grown) < base {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
