//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Channel parameters outside [0, 1], empty channel lists, malformed
    /// parameter files, and similar configuration problems.
    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    /// A channel with p01 = p10 = 0 has no unique stationary distribution,
    /// so stationary initialization is undefined for it.
    #[error("channel {channel} is degenerate (p01 + p10 = 0): no stationary distribution")]
    DegenerateChannel { channel: usize },

    /// A belief entry outside [0, 1] or not finite.
    #[error("invalid belief {value} at channel {channel}: beliefs must lie in [0, 1]")]
    InvalidBelief { channel: usize, value: f64 },

    /// An index set violating an action contract (out of range, duplicate,
    /// wrong cardinality, bad pivot, ...).
    #[error("invalid action: {0}")]
    InvalidAction(String),

    /// A sense outcome that cannot have been produced by the paired action
    /// and state (length mismatch, erasure where erasure is impossible, ...).
    #[error("inconsistent sense outcome: {0}")]
    InconsistentOutcome(String),

    /// Exhaustive search asked for on an instance above its hard size cap.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// Two distinct supports of minimal size fit the same observation; the
    /// sensing matrix violates the K-column independence requirement.
    #[error("ambiguous recovery: multiple minimal supports fit the observation")]
    AmbiguousRecovery,

    /// Invalid experiment configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
