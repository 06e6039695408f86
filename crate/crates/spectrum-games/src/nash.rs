//! Best-response correspondences and the full Nash-equilibrium classification
//! of the two-player game, including the mixed equilibria of the
//! weak-primary regime, plus a grid-based verification oracle.

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{cap, AlphaTilde, GameParams, Strategy, UtilityPair};

/// A player's set of best responses to a fixed opponent strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReactionSet {
    /// A unique best response.
    Point(f64),
    /// Exactly two best responses (indifference between them).
    TwoPoint(f64, f64),
    /// Every value in the closed interval is a best response.
    Interval(f64, f64),
    /// A sampled reaction curve, as `(opponent value, response)` pairs.
    Curve(Vec<(f64, f64)>),
}

impl ReactionSet {
    /// Membership test with absolute tolerance `tol`.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        match self {
            ReactionSet::Point(p) => (x - p).abs() <= tol,
            ReactionSet::TwoPoint(p, q) => (x - p).abs() <= tol || (x - q).abs() <= tol,
            ReactionSet::Interval(lo, hi) => x >= lo - tol && x <= hi + tol,
            ReactionSet::Curve(points) => points.iter().any(|&(_, r)| (x - r).abs() <= tol),
        }
    }

    /// A deterministic representative (first point / lower endpoint).
    pub fn canonical(&self) -> f64 {
        match self {
            ReactionSet::Point(p) => *p,
            ReactionSet::TwoPoint(p, _) => *p,
            ReactionSet::Interval(lo, _) => *lo,
            ReactionSet::Curve(points) => points.first().map(|&(_, r)| r).unwrap_or(0.0),
        }
    }
}

/// Support family declared for a secondary-user mixed strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SupportFamily {
    /// Point mass.
    Singleton(f64),
    /// Any distribution supported on the closed interval with the declared
    /// mean is an equilibrium; the mean is the canonical representative.
    Interval(f64, f64),
}

/// Mixed equilibrium strategies: a discrete primary distribution plus the
/// expected-fraction representation for the secondary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy {
    /// Primary support as `(power, probability)`; probabilities sum to one.
    pub pu_support: Vec<(f64, f64)>,
    /// Expected secondary fraction in `[0, 1]`.
    pub su_expected_alpha: f64,
    /// Declared support family for the secondary distribution.
    pub su_support: SupportFamily,
}

/// Which equilibrium case fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NashCase {
    /// Strong primary, threshold below the zero-fraction power.
    #[serde(rename = "T1-low-Q")]
    T1LowQ,
    /// Strong primary, threshold between the extreme stationary powers.
    #[serde(rename = "T1-mid-Q")]
    T1MidQ,
    /// Strong primary, threshold above the full-fraction power.
    #[serde(rename = "T1-high-Q")]
    T1HighQ,
    /// Weak primary, negative threshold.
    #[serde(rename = "T2-neg-Q")]
    T2NegQ,
    /// Weak primary, threshold exactly zero.
    #[serde(rename = "T2-zero-Q")]
    T2ZeroQ,
    /// Weak primary, mixed equilibrium on two powers.
    #[serde(rename = "T2-mixed")]
    T2Mixed,
    /// Weak primary, threshold between `P'(alpha_tilde)` and `P'(1)`.
    #[serde(rename = "T2-mid-Q")]
    T2MidQ,
    /// Weak primary, threshold above the full-fraction power.
    #[serde(rename = "T2-high-Q")]
    T2HighQ,
}

impl NashCase {
    /// Stable label used in serialized output.
    pub fn label(&self) -> &'static str {
        match self {
            NashCase::T1LowQ => "T1-low-Q",
            NashCase::T1MidQ => "T1-mid-Q",
            NashCase::T1HighQ => "T1-high-Q",
            NashCase::T2NegQ => "T2-neg-Q",
            NashCase::T2ZeroQ => "T2-zero-Q",
            NashCase::T2Mixed => "T2-mixed",
            NashCase::T2MidQ => "T2-mid-Q",
            NashCase::T2HighQ => "T2-high-Q",
        }
    }
}

/// Equilibrium strategies, pure or mixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EquilibriumStrategy {
    /// Pure strategy pair.
    Pure(Strategy),
    /// Mixed strategies (canonical representative).
    Mixed(MixedStrategy),
}

impl EquilibriumStrategy {
    /// Primary support as `(power, probability)` pairs.
    pub fn pu_support(&self) -> Vec<(f64, f64)> {
        match self {
            EquilibriumStrategy::Pure(s) => vec![(s.p0, 1.0)],
            EquilibriumStrategy::Mixed(m) => m.pu_support.clone(),
        }
    }

    /// Expected secondary fraction.
    pub fn su_expected_alpha(&self) -> f64 {
        match self {
            EquilibriumStrategy::Pure(s) => s.alpha,
            EquilibriumStrategy::Mixed(m) => m.su_expected_alpha,
        }
    }
}

/// Tagged Nash-equilibrium result with (expected) utilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NashOutcome {
    /// Which case of the classification fired.
    pub case: NashCase,
    /// The equilibrium strategies.
    pub strategies: EquilibriumStrategy,
    /// Expected utilities under the returned strategies.
    pub utilities: UtilityPair,
}

/// Result of the no-profitable-deviation oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// True when every check stayed within `tolerance`.
    pub passed: bool,
    /// Largest primary utility gain from a unilateral grid deviation.
    pub worst_pu_deviation: f64,
    /// Largest secondary utility gain from a unilateral deviation.
    pub worst_su_deviation: f64,
    /// Spread of primary utility across its support (indifference check).
    pub pu_indifference_spread: f64,
    /// Residual secondary slope across a non-singleton support.
    pub su_indifference_residual: f64,
    /// Tolerance used: `1e-6` plus the Lipschitz grid slack.
    pub tolerance: f64,
    /// Number of grid points scanned.
    pub grid_n: usize,
}

/// Secondary best response to a primary power: transmit fully below the
/// threshold, eavesdrop fully above it, indifferent exactly at it.
pub fn su_best_response(params: &GameParams, p0: f64) -> ReactionSet {
    let q = params.threshold_q();
    if p0 < q {
        ReactionSet::Point(1.0)
    } else if p0 > q {
        ReactionSet::Point(0.0)
    } else {
        ReactionSet::Interval(0.0, 1.0)
    }
}

/// Primary best response to a secondary fraction.
///
/// Strong-primary regime: the stationary power `P'(alpha)`. Weak-primary
/// regime: silence below `alpha_tilde`, the two-point indifference set at
/// `alpha_tilde` (exact equality), and `P'(alpha)` above it.
pub fn pu_best_response(params: &GameParams, alpha: f64) -> ReactionSet {
    if params.a >= params.b {
        return ReactionSet::Point(params.p_prime(alpha).unwrap_or(0.0));
    }
    match params.alpha_tilde() {
        AlphaTilde::Below => ReactionSet::Point(params.p_prime(alpha).unwrap_or(0.0)),
        AlphaTilde::Above => ReactionSet::Point(0.0),
        AlphaTilde::Interior(at) => {
            if alpha < at {
                ReactionSet::Point(0.0)
            } else if alpha > at {
                ReactionSet::Point(params.p_prime(alpha).unwrap_or(0.0))
            } else {
                ReactionSet::TwoPoint(0.0, params.p_prime(at).unwrap_or(0.0))
            }
        }
    }
}

/// Sampled primary reaction curve `alpha -> P*(alpha)` on `n + 1` points.
pub fn pu_reaction_curve(params: &GameParams, n: usize) -> ReactionSet {
    let points = (0..=n)
        .map(|i| {
            let alpha = i as f64 / n as f64;
            (alpha, params.p_star(alpha))
        })
        .collect();
    ReactionSet::Curve(points)
}

/// Primary mixing probabilities `(P(0), P(P'(alpha_tilde)))` making the
/// secondary indifferent at `alpha_tilde`.
///
/// Solves `p C(c p1_max) + (1 - p) C(c p1_max / (1 + a P'(alpha_tilde))) =
/// beta` with `p + (1 - p) = 1`; both probabilities must be strictly inside
/// `(0, 1)`, otherwise the case was misclassified and an error is returned.
pub fn mixed_pu_probs(params: &GameParams) -> Result<(f64, f64)> {
    let at = params.alpha_tilde().clamped();
    let p_tilde = params.p_prime(at).unwrap_or(0.0);
    let c_high = cap(params.c * params.p1_max);
    let c_low = cap(params.c * params.p1_max / (1.0 + params.a * p_tilde));
    let denom = c_high - c_low;
    if denom <= 0.0 {
        return Err(GameError::InfeasibleMixed {
            beta: params.beta,
            c_low,
            c_high,
        });
    }
    let p_zero = (params.beta - c_low) / denom;
    if p_zero <= 0.0 || p_zero >= 1.0 {
        return Err(GameError::InfeasibleMixed {
            beta: params.beta,
            c_low,
            c_high,
        });
    }
    Ok((p_zero, 1.0 - p_zero))
}

fn pure(params: &GameParams, case: NashCase, p0: f64, alpha: f64) -> NashOutcome {
    NashOutcome {
        case,
        strategies: EquilibriumStrategy::Pure(Strategy { p0, alpha }),
        utilities: params.utilities(p0, alpha),
    }
}

/// Full Nash-equilibrium classification.
///
/// Strong-primary regime (`a >= b`): three pure cases keyed on the position
/// of the threshold `Q` relative to `P'(0)` and `P'(1)`; seam values route to
/// the middle case. Weak-primary regime (`a < b`): five cases, two of them
/// mixed; utilities are expectations under the returned strategies.
pub fn solve_nash(params: &GameParams) -> Result<NashOutcome> {
    let q = params.threshold_q();
    if params.a >= params.b {
        let pp0 = params.p_prime(0.0).unwrap_or(0.0);
        let pp1 = params.p_prime(1.0).unwrap_or(0.0);
        let outcome = if q < pp0 {
            pure(params, NashCase::T1LowQ, pp0, 0.0)
        } else if q <= pp1 {
            let alpha_q = params.alpha_q_raw().clamp(0.0, 1.0);
            pure(params, NashCase::T1MidQ, q, alpha_q)
        } else {
            pure(params, NashCase::T1HighQ, pp1, 1.0)
        };
        return Ok(outcome);
    }

    let at = params.alpha_tilde().clamped();
    let p_tilde = params.p_prime(at).unwrap_or(0.0);
    let pp1 = params.p_prime(1.0).unwrap_or(0.0);

    let outcome = if q < 0.0 {
        pure(params, NashCase::T2NegQ, 0.0, 0.0)
    } else if q == 0.0 {
        let expected = 0.5 * at;
        NashOutcome {
            case: NashCase::T2ZeroQ,
            strategies: EquilibriumStrategy::Mixed(MixedStrategy {
                pu_support: vec![(0.0, 1.0)],
                su_expected_alpha: expected,
                su_support: SupportFamily::Interval(0.0, at),
            }),
            utilities: UtilityPair {
                u0: 0.0,
                u1: params.su_utility(0.0, expected),
            },
        }
    } else if q < p_tilde {
        let (p_zero, p_high) = mixed_pu_probs(params)?;
        let c_high = cap(params.c * params.p1_max);
        let c_low = cap(params.c * params.p1_max / (1.0 + params.a * p_tilde));
        let u0 = p_zero * params.pu_utility(0.0, at) + p_high * params.pu_utility(p_tilde, at);
        let u1 = at * (p_zero * c_high + p_high * c_low - params.beta);
        NashOutcome {
            case: NashCase::T2Mixed,
            strategies: EquilibriumStrategy::Mixed(MixedStrategy {
                pu_support: vec![(0.0, p_zero), (p_tilde, p_high)],
                su_expected_alpha: at,
                su_support: SupportFamily::Interval(0.0, 1.0),
            }),
            utilities: UtilityPair { u0, u1 },
        }
    } else if q <= pp1 {
        let alpha_q = params.alpha_q_raw().clamp(0.0, 1.0);
        NashOutcome {
            case: NashCase::T2MidQ,
            strategies: EquilibriumStrategy::Mixed(MixedStrategy {
                pu_support: vec![(q, 1.0)],
                su_expected_alpha: alpha_q,
                su_support: SupportFamily::Interval(0.0, 1.0),
            }),
            utilities: params.utilities(q, alpha_q),
        }
    } else {
        pure(params, NashCase::T2HighQ, pp1, 1.0)
    };
    Ok(outcome)
}

/// Grid oracle: checks that no unilateral deviation improves either player
/// beyond `1e-6` plus a Lipschitz grid-slack term, and that the indifference
/// conditions hold on mixed supports.
///
/// `grid_n` is clamped to at least 1000 points.
pub fn verify_equilibrium(
    params: &GameParams,
    outcome: &NashOutcome,
    grid_n: usize,
) -> VerificationReport {
    let grid_n = grid_n.max(1000);
    let step = params.p0_max / (grid_n - 1) as f64;
    let slope_bound = params.a + params.b + params.c * params.p1_max;
    let tolerance = 1e-6 + slope_bound * step;

    let support = outcome.strategies.pu_support();
    let alpha_bar = outcome.strategies.su_expected_alpha();

    // Primary side: utility is linear in alpha, so the expected utility of a
    // pure deviation against the secondary's mixture is u0(p, E[alpha]).
    let achieved_u0: f64 = support
        .iter()
        .map(|&(p0, w)| w * params.pu_utility(p0, alpha_bar))
        .sum();
    let mut best_grid_u0 = f64::NEG_INFINITY;
    for i in 0..grid_n {
        let p0 = if i + 1 == grid_n {
            params.p0_max
        } else {
            i as f64 * step
        };
        let u = params.pu_utility(p0, alpha_bar);
        if u > best_grid_u0 {
            best_grid_u0 = u;
        }
    }
    let worst_pu_deviation = (best_grid_u0 - achieved_u0).max(0.0);

    // Secondary side: utility is linear in alpha with slope
    // E_f[C(c p1_max / (1 + a P0))] - beta, so deviations are extremal at 0/1.
    let slope: f64 = support
        .iter()
        .map(|&(p0, w)| w * cap(params.c * params.p1_max / (1.0 + params.a * p0)))
        .sum::<f64>()
        - params.beta;
    let achieved_u1 = alpha_bar * slope;
    let worst_su_deviation = (slope.max(0.0) - achieved_u1).max(0.0);

    // Indifference conditions on mixed supports.
    let mut pu_indifference_spread = 0.0;
    let mut su_indifference_residual = 0.0;
    if let EquilibriumStrategy::Mixed(m) = &outcome.strategies {
        if m.pu_support.len() > 1 {
            let values: Vec<f64> = m
                .pu_support
                .iter()
                .map(|&(p0, _)| params.pu_utility(p0, alpha_bar))
                .collect();
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            pu_indifference_spread = max - min;
        }
        if let SupportFamily::Interval(lo, hi) = m.su_support {
            if hi > lo {
                su_indifference_residual = slope.abs();
            }
        }
    }

    let passed = worst_pu_deviation <= tolerance
        && worst_su_deviation <= tolerance
        && pu_indifference_spread <= tolerance
        && su_indifference_residual <= tolerance;

    VerificationReport {
        passed,
        worst_pu_deviation,
        worst_su_deviation,
        pu_indifference_spread,
        su_indifference_residual,
        tolerance,
        grid_n,
    }
}
