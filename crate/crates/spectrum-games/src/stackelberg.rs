//! Leader-follower equilibria: the epsilon-equilibrium under primary
//! leadership (both channel regimes), the secondary-led equilibrium, the
//! leader's guaranteed value, and dominance verdicts against Nash outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{AlphaTilde, GameParams, UtilityPair, LN_4};
use crate::nash::NashOutcome;
use crate::numeric::grid_then_golden_max;

/// Which player leads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Leader {
    /// Primary user announces its power first.
    Pu,
    /// Secondary user announces its fraction first.
    Su,
}

/// A leader-follower equilibrium outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StackelbergOutcome {
    /// The leading player.
    pub leader: Leader,
    /// Leader's committed strategy (power for Pu, fraction for Su).
    pub leader_strategy: f64,
    /// Follower's best response (fraction for Pu-led, power for Su-led).
    pub follower_strategy: f64,
    /// Utilities at the outcome.
    pub utilities: UtilityPair,
    /// Leader's guaranteed value (primary-led only).
    pub leader_value: Option<f64>,
    /// Backoff requested for the epsilon-equilibrium.
    pub epsilon_used: f64,
}

/// Comparison of a Stackelberg outcome against a Nash outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    /// Utilities at the Stackelberg outcome.
    pub se_utilities: UtilityPair,
    /// (Expected) utilities at the Nash outcome.
    pub ne_utilities: UtilityPair,
    /// True when both margins are at least `-1e-9`.
    pub dominates: bool,
    /// `u0(SE) - u0(NE)`.
    pub margin_u0: f64,
    /// `u1(SE) - u1(NE)`.
    pub margin_u1: f64,
}

const DOMINANCE_SLACK: f64 = 1e-9;

/// Guaranteed primary value under its own leadership.
///
/// Strong-primary regime: the four-case table on the position of `Q`.
/// Weak-primary regime: the corresponding values along the backoff strategy.
pub fn leader_value(params: &GameParams) -> f64 {
    let q = params.threshold_q();
    let pp1 = params.p_prime(1.0).unwrap_or(0.0);
    if params.a >= params.b {
        let pp0 = params.p_prime(0.0).unwrap_or(0.0);
        if q <= 0.0 {
            params.pu_utility(pp0, 0.0)
        } else if q < pp0 {
            params.pu_utility(q, 1.0).max(params.pu_utility(pp0, 0.0))
        } else if q <= pp1 {
            params.pu_utility(q, 1.0)
        } else {
            params.pu_utility(pp1, 1.0)
        }
    } else if q <= 0.0 {
        0.0
    } else if q <= pp1 {
        params.pu_utility(q, 1.0)
    } else {
        params.pu_utility(pp1, 1.0)
    }
}

/// Backoff below `q` sized so the utility concession stays within `epsilon`.
///
/// The raw slope of `u0(., 1)` can exceed one, so a power step of `epsilon`
/// may cost more than `epsilon` in utility; divide by the local slope bound
/// when it exceeds one. For flat slopes this reduces to `q - epsilon`.
fn backed_off_power(params: &GameParams, q: f64) -> f64 {
    let slope_at_edge =
        (params.a / (1.0 + params.a * (q - params.epsilon)) - params.gamma_bar) / LN_4;
    let step = params.epsilon / slope_at_edge.max(1.0);
    q - step
}

fn require_epsilon_fits(params: &GameParams, q: f64) -> Result<()> {
    if params.epsilon >= q {
        Err(GameError::EpsilonExceedsThreshold {
            epsilon: params.epsilon,
            q,
        })
    } else {
        Ok(())
    }
}

/// Epsilon-equilibrium strategy under primary leadership.
///
/// The leader either backs off just below the access threshold (letting the
/// secondary transmit full time) or plays its unconstrained best power,
/// case-keyed on `Q`; the follower best-responds with a full or zero
/// fraction. The achieved utility is guaranteed within `epsilon` of
/// [`leader_value`].
pub fn sep_strategy(params: &GameParams) -> Result<StackelbergOutcome> {
    let q = params.threshold_q();
    let pp1 = params.p_prime(1.0).unwrap_or(0.0);
    let leader_power = if params.a >= params.b {
        let pp0 = params.p_prime(0.0).unwrap_or(0.0);
        if q <= 0.0 {
            pp0
        } else if q < pp0 {
            require_epsilon_fits(params, q)?;
            let backed = backed_off_power(params, q);
            // Tie prefers the backoff, which grants the secondary access.
            if params.pu_utility(backed, 1.0) >= params.pu_utility(pp0, 0.0) {
                backed
            } else {
                pp0
            }
        } else if q <= pp1 {
            require_epsilon_fits(params, q)?;
            backed_off_power(params, q)
        } else {
            pp1
        }
    } else if q <= 0.0 {
        0.0
    } else if q <= pp1 {
        require_epsilon_fits(params, q)?;
        backed_off_power(params, q)
    } else {
        pp1
    };

    let follower = if leader_power < q { 1.0 } else { 0.0 };
    let utilities = params.utilities(leader_power, follower);
    let value = leader_value(params);
    debug_assert!(
        utilities.u0 >= value - params.epsilon - 1e-12,
        "epsilon guarantee violated: {} < {} - {}",
        utilities.u0,
        value,
        params.epsilon
    );
    Ok(StackelbergOutcome {
        leader: Leader::Pu,
        leader_strategy: leader_power,
        follower_strategy: follower,
        utilities,
        leader_value: Some(value),
        epsilon_used: params.epsilon,
    })
}

/// Equilibrium strategy under secondary leadership.
///
/// Strong-primary regime: maximize `alpha (C(c p1_max / (1 + a P'(alpha))) -
/// beta)` by a 1000-point grid pre-scan plus golden-section refinement; the
/// follower answers with its best power. Weak-primary regime: back off to
/// `alpha_tilde - epsilon`, keeping the primary silent.
pub fn ses_strategy(params: &GameParams) -> StackelbergOutcome {
    if params.a >= params.b {
        let objective = |alpha: f64| {
            let p = params.p_star(alpha);
            params.su_utility(p, alpha)
        };
        let (alpha_bar, _) = grid_then_golden_max(objective, 0.0, 1.0, 1000, 1e-8);
        let follower = params.p_star(alpha_bar);
        StackelbergOutcome {
            leader: Leader::Su,
            leader_strategy: alpha_bar,
            follower_strategy: follower,
            utilities: params.utilities(follower, alpha_bar),
            leader_value: None,
            epsilon_used: params.epsilon,
        }
    } else {
        let at = match params.alpha_tilde() {
            AlphaTilde::Below => 0.0,
            AlphaTilde::Interior(v) => v,
            AlphaTilde::Above => 1.0,
        };
        let alpha_bar = (at - params.epsilon).max(0.0);
        StackelbergOutcome {
            leader: Leader::Su,
            leader_strategy: alpha_bar,
            follower_strategy: 0.0,
            utilities: params.utilities(0.0, alpha_bar),
            leader_value: None,
            epsilon_used: params.epsilon,
        }
    }
}

/// Both-player dominance verdict: the Stackelberg outcome dominates when
/// neither player loses more than `1e-9` relative to the Nash outcome.
pub fn dominance_check(se: &StackelbergOutcome, ne: &NashOutcome) -> DominanceReport {
    let margin_u0 = se.utilities.u0 - ne.utilities.u0;
    let margin_u1 = se.utilities.u1 - ne.utilities.u1;
    DominanceReport {
        se_utilities: se.utilities,
        ne_utilities: ne.utilities,
        dominates: margin_u0 >= -DOMINANCE_SLACK && margin_u1 >= -DOMINANCE_SLACK,
        margin_u0,
        margin_u1,
    }
}

/// The predicted play of the one-shot game: the secondary accepts the
/// follower role and the outcome is the primary-led equilibrium.
pub fn predicted_outcome(params: &GameParams) -> Result<StackelbergOutcome> {
    sep_strategy(params)
}
