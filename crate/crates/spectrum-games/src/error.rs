//! Error type shared by all solver modules.

use thiserror::Error;

/// Errors reported by the game solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    /// A channel SNR argument was negative.
    #[error("snr must be nonnegative, got {0}")]
    NegativeSnr(f64),

    /// The exponential-integral argument must be strictly positive.
    #[error("exponential integral requires x > 0, got {0}")]
    NonPositiveArgument(f64),

    /// A game parameter violated its positivity constraint.
    #[error("parameter `{name}` must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    /// The leader backoff does not fit below the maximum power.
    #[error("epsilon {epsilon} must be smaller than p0_max {p0_max}")]
    EpsilonAboveMaxPower { epsilon: f64, p0_max: f64 },

    /// The leader backoff would push the power below zero.
    #[error("epsilon {epsilon} is not smaller than the access threshold {q}; leader power would go negative")]
    EpsilonExceedsThreshold { epsilon: f64, q: f64 },

    /// The mixed-equilibrium indifference system has no solution in (0, 1).
    #[error("mixed equilibrium infeasible: beta {beta} outside ({c_low}, {c_high}); case misclassified")]
    InfeasibleMixed { beta: f64, c_low: f64, c_high: f64 },

    /// A strategy component fell outside its admissible box.
    #[error("strategy component `{name}` = {value} not in [{lo}, {hi}]")]
    StrategyOutOfBounds {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Secondary users do not share the uniform (c_i * p_max_i, beta_i) parameters.
    #[error("secondary-user parameters are not uniform ({0}); use brute_force_order instead")]
    NonUniformParameters(String),

    /// Exhaustive order search is capped to keep the factorial enumeration tractable.
    #[error("permutation search supports at most {max} secondary users, got {n}")]
    TooManyUsers { n: usize, max: usize },

    /// Secondary-user identifiers must be unique.
    #[error("duplicate secondary-user id `{0}`")]
    DuplicateSuId(String),

    /// A decoding order did not enumerate every secondary user exactly once.
    #[error("decoding order is not a permutation of the secondary users")]
    InvalidOrder,

    /// An internal consistency check failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, GameError>;
