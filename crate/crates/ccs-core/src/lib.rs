//! Cognitive compressive sensing over restless Markov channels.
//!
//! A collector with a budget of K linear measurements per slot watches N
//! two-state Markov channels and chooses, each slot, *which subset of
//! columns* of a K x N sensing matrix to activate. Sensing exactly K
//! channels always reveals their states; sensing a larger set reveals the
//! full busy pattern only while the number of busy channels stays below the
//! unique-recovery threshold, and otherwise yields an erasure that carries
//! no reward and no information. The crate provides:
//!
//! * ground-truth channel dynamics and stationary initialization
//!   ([`channel`]);
//! * belief tracking with the four-case posterior update ([`belief`]);
//! * exact Poisson-binomial busy-count statistics, erasure probabilities,
//!   and monotone-PMF condition checks ([`support`]);
//! * realized/expected rewards for idle- and busy-channel collectors with
//!   closed-form marginals ([`reward`]);
//! * action selection: K-arm baseline, optimal-myopic and greedy prefix
//!   policies, exhaustive busy-collector search, a brute-force oracle, and
//!   a tiny exact dynamic program ([`policy`]);
//! * a Vandermonde sensing frontend with l0-oracle recovery realizing the
//!   erasure abstraction ([`sensing`]);
//! * a deterministic Monte Carlo harness with CSV/JSON output ([`sim`]).

pub mod belief;
pub mod channel;
pub mod error;
pub mod policy;
pub mod reward;
pub mod sensing;
pub mod sim;
pub mod support;

pub use belief::{BeliefVector, SenseOutcome};
pub use channel::{ChannelParams, StateVector};
pub use error::{Error, Result};
pub use policy::{Action, PolicySpec};
pub use reward::RewardKind;
pub use sensing::SensingMatrix;
pub use sim::{EpisodeRng, ExperimentConfig, SweepRow, TrialStats};
pub use support::SupportPmf;
