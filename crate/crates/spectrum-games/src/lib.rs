//! Equilibrium solvers for a spectrum-access game in which a licensed
//! transmitter protects its confidential rate against cognitive users that
//! leverage eavesdropping to win transmission time.
//!
//! The crate provides:
//!
//! - [`game`]: parameters, utilities and the closed-form quantities of the
//!   two-player game;
//! - [`nash`]: best responses, the full Nash classification (pure and mixed)
//!   and a grid-based verification oracle;
//! - [`stackelberg`]: epsilon-equilibria under either player's leadership,
//!   leader values and dominance verdicts;
//! - [`bayes`]: the hidden eavesdropper-channel variant with an exponential
//!   belief, its special function, and seeded Monte Carlo comparisons;
//! - [`multi`]: the multi-secondary-user game, decoding orders, the
//!   spectrum-grant algorithm and brute-force oracles.
//!
//! All solvers are pure functions of their inputs; values are immutable and
//! safe to share across threads.

pub mod bayes;
pub mod error;
pub mod game;
pub mod multi;
pub mod nash;
mod numeric;
pub mod stackelberg;

pub use bayes::{
    bayes_sep, exp_integral_e1, expected_pu_utility, monte_carlo_compare, p_b, BeliefModel,
    ComparisonRecord,
};
pub use error::{GameError, Result};
pub use game::{capacity, AlphaTilde, GameParams, Strategy, UtilityPair};
pub use multi::{
    brute_force_order, followers_cascade, grant_algorithm, optimal_order_uniform,
    pu_utility_multi, su_utility_multi, threshold_qi, DecodingOrder, MultiGame, MultiOutcome,
    PuProfile, SuProfile,
};
pub use nash::{
    mixed_pu_probs, pu_best_response, solve_nash, su_best_response, verify_equilibrium,
    EquilibriumStrategy, MixedStrategy, NashCase, NashOutcome, ReactionSet, VerificationReport,
};
pub use stackelberg::{
    dominance_check, leader_value, predicted_outcome, sep_strategy, ses_strategy,
    DominanceReport, Leader, StackelbergOutcome,
};
