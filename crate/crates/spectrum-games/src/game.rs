//! Two-player game primitives: parameters, utilities and the closed-form
//! quantities (threshold `Q`, stationary power `P'`, best power `P*`, the
//! inverse map `alpha_q` and the zero-utility fraction `alpha_tilde`) that the
//! equilibrium solvers are built from.
//!
//! Power cost convention: the API takes the scaled cost `gamma_bar` and the
//! utilities internally use `gamma = gamma_bar / ln 4`, so stationarity
//! conditions match the closed forms exactly.

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};

/// `ln 4`, the scaling between `gamma_bar` and the per-unit power cost.
pub const LN_4: f64 = 2.0 * std::f64::consts::LN_2;

/// Half-spectral Shannon capacity `C(x) = (1/2) log2(1 + x)`.
///
/// Strictly increasing and concave; errors on negative SNR.
pub fn capacity(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(GameError::NegativeSnr(x));
    }
    Ok(cap(x))
}

/// Unchecked capacity for internal call sites with provably nonnegative SNR.
#[inline]
pub(crate) fn cap(x: f64) -> f64 {
    debug_assert!(x >= 0.0, "negative snr {x}");
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// Channel gains and cost constants of the two-player game.
///
/// `b` may be on either side of `a`; both regimes are legal and the solvers
/// branch on the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    /// Primary-channel power gain (> 0).
    pub a: f64,
    /// Eavesdropper-channel power gain (> 0).
    pub b: f64,
    /// Secondary-channel power gain (> 0).
    pub c: f64,
    /// Scaled primary power cost, `gamma_bar = gamma * ln 4` (> 0).
    pub gamma_bar: f64,
    /// Secondary energy cost per unit transmission time (> 0).
    pub beta: f64,
    /// Maximum primary power (> 0).
    pub p0_max: f64,
    /// Secondary transmit power, used in full whenever transmitting (> 0).
    pub p1_max: f64,
    /// Leader backoff for the epsilon-Stackelberg strategies (> 0, < p0_max).
    pub epsilon: f64,
}

/// Outcome of locating the zero of `alpha -> u0(P'(alpha), alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AlphaTilde {
    /// The root lies below 0: the game behaves like the strong-primary regime.
    Below,
    /// Interior root in `[0, 1]`.
    Interior(f64),
    /// The root lies above 1: the primary is silent for every fraction.
    Above,
}

impl AlphaTilde {
    /// Interior value, if any.
    pub fn value(&self) -> Option<f64> {
        match self {
            AlphaTilde::Interior(v) => Some(*v),
            _ => None,
        }
    }

    /// Collapse to a fraction in `[0, 1]` (`Below -> 0`, `Above -> 1`).
    pub fn clamped(&self) -> f64 {
        match self {
            AlphaTilde::Below => 0.0,
            AlphaTilde::Interior(v) => *v,
            AlphaTilde::Above => 1.0,
        }
    }
}

/// A pure strategy pair: primary power and secondary transmit-time fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strategy {
    /// Primary power level in `[0, p0_max]`.
    pub p0: f64,
    /// Secondary transmit-time fraction in `[0, 1]`.
    pub alpha: f64,
}

impl Strategy {
    /// Validates the box constraints against `params`.
    pub fn new(params: &GameParams, p0: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=params.p0_max).contains(&p0) {
            return Err(GameError::StrategyOutOfBounds {
                name: "p0",
                value: p0,
                lo: 0.0,
                hi: params.p0_max,
            });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(GameError::StrategyOutOfBounds {
                name: "alpha",
                value: alpha,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Strategy { p0, alpha })
    }
}

/// Utilities of both players at a strategy profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityPair {
    /// Primary utility (rate net of power cost, bits/channel use).
    pub u0: f64,
    /// Secondary utility (rate net of energy cost, bits/channel use).
    pub u1: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(GameError::NonPositiveParameter { name, value })
    }
}

impl GameParams {
    /// Default leader backoff when none is given.
    pub const DEFAULT_EPSILON: f64 = 1e-3;

    /// Builds a validated parameter set with the default backoff.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        c: f64,
        gamma_bar: f64,
        beta: f64,
        p0_max: f64,
        p1_max: f64,
    ) -> Result<Self> {
        let params = GameParams {
            a,
            b,
            c,
            gamma_bar,
            beta,
            p0_max,
            p1_max,
            epsilon: Self::DEFAULT_EPSILON,
        };
        params.validate()?;
        Ok(params)
    }

    /// Replaces the leader backoff, revalidating.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    /// Checks every positivity constraint and `epsilon < p0_max`.
    pub fn validate(&self) -> Result<()> {
        positive("a", self.a)?;
        positive("b", self.b)?;
        positive("c", self.c)?;
        positive("gamma_bar", self.gamma_bar)?;
        positive("beta", self.beta)?;
        positive("p0_max", self.p0_max)?;
        positive("p1_max", self.p1_max)?;
        positive("epsilon", self.epsilon)?;
        if self.epsilon >= self.p0_max {
            return Err(GameError::EpsilonAboveMaxPower {
                epsilon: self.epsilon,
                p0_max: self.p0_max,
            });
        }
        Ok(())
    }

    /// Per-unit power cost `gamma = gamma_bar / ln 4` used in the utilities.
    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma_bar / LN_4
    }

    /// Primary utility without clipping:
    /// `C(a p0) - (1 - alpha) C(b p0) - gamma p0`.
    pub fn pu_utility(&self, p0: f64, alpha: f64) -> f64 {
        cap(self.a * p0) - (1.0 - alpha) * cap(self.b * p0) - self.gamma() * p0
    }

    /// Primary utility with the secrecy-rate bracket clipped at zero:
    /// `[C(a p0) - (1 - alpha) C(b p0)]^+ - gamma p0`.
    ///
    /// Agrees with [`GameParams::pu_utility`] wherever the bracket is
    /// nonnegative, and shares its maximizers in `p0` for fixed `alpha`.
    pub fn pu_utility_secrecy(&self, p0: f64, alpha: f64) -> f64 {
        let bracket = cap(self.a * p0) - (1.0 - alpha) * cap(self.b * p0);
        bracket.max(0.0) - self.gamma() * p0
    }

    /// Secondary utility `alpha (C(c p1_max / (1 + a p0)) - beta)`.
    pub fn su_utility(&self, p0: f64, alpha: f64) -> f64 {
        alpha * (cap(self.c * self.p1_max / (1.0 + self.a * p0)) - self.beta)
    }

    /// Both utilities at a strategy profile.
    pub fn utilities(&self, p0: f64, alpha: f64) -> UtilityPair {
        UtilityPair {
            u0: self.pu_utility(p0, alpha),
            u1: self.su_utility(p0, alpha),
        }
    }

    /// Access threshold `Q = (1/a) (c p1_max / (2^(2 beta) - 1) - 1)`.
    ///
    /// The secondary's payoff slope in `alpha` is positive exactly when
    /// `p0 < Q`. May be negative.
    pub fn threshold_q(&self) -> f64 {
        (self.c * self.p1_max / ((2.0 * self.beta).exp2() - 1.0) - 1.0) / self.a
    }

    /// Concavity boundary `(b sqrt(1-alpha) - a) / (a b (1 - sqrt(1-alpha)))`.
    ///
    /// The primary utility is concave in `p0` above this point and convex
    /// below. At `alpha = 0` the expression degenerates; callers only compare
    /// sign/position, so the signed infinity matching the `a` vs `b` regime is
    /// returned instead.
    pub fn p_hat(&self, alpha: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&alpha));
        if alpha == 0.0 {
            return if self.b > self.a {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        let root = (1.0 - alpha).sqrt();
        (self.b * root - self.a) / (self.a * self.b * (1.0 - root))
    }

    fn quadratic_xy(&self, alpha: f64) -> (f64, f64) {
        let x = alpha * self.a * self.b - self.gamma_bar * (self.a + self.b);
        let y = 4.0
            * self.gamma_bar
            * self.a
            * self.b
            * (self.gamma_bar - self.a + self.b * (1.0 - alpha));
        (x, y)
    }

    /// Stationary power on the concave branch,
    /// `P'(alpha) = (X + sqrt(X^2 - Y)) / (2 gamma_bar a b)`,
    /// clamped to `[0, p0_max]`.
    ///
    /// Returns `None` when `X^2 - Y < 0` (no real stationary point; the
    /// utility is then strictly decreasing in `p0`).
    pub fn p_prime(&self, alpha: f64) -> Option<f64> {
        debug_assert!((0.0..=1.0).contains(&alpha));
        let (x, y) = self.quadratic_xy(alpha);
        let disc = x * x - y;
        if disc < 0.0 {
            return None;
        }
        let p = (x + disc.sqrt()) / (2.0 * self.gamma_bar * self.a * self.b);
        Some(p.clamp(0.0, self.p0_max))
    }

    /// Best primary power for a fixed `alpha`: the better of `0` and
    /// `P'(alpha)` (boundary comparison when no stationary point exists).
    /// Exact ties resolve to `0`.
    pub fn p_star(&self, alpha: f64) -> f64 {
        let candidate = match self.p_prime(alpha) {
            Some(p) => p,
            None => self.p0_max,
        };
        if self.pu_utility(candidate, alpha) > self.pu_utility(0.0, alpha) {
            candidate
        } else {
            0.0
        }
    }

    /// Closed form for the best power under full secondary transmission:
    /// `min(p0_max, [1/gamma_bar - 1/a]^+)`.
    pub fn p_star_full_alpha(&self) -> f64 {
        let unconstrained = (1.0 / self.gamma_bar - 1.0 / self.a).max(0.0);
        unconstrained.min(self.p0_max)
    }

    pub(crate) fn alpha_q_raw(&self) -> f64 {
        let q = self.threshold_q();
        let num = self.gamma_bar * (q * (self.a + self.b + self.a * self.b * q) + 1.0) - self.a
            + self.b;
        num / (self.b * (self.a * q + 1.0))
    }

    /// Fraction solving `P'(alpha) = Q` in closed form, when it lands in
    /// `[0, 1]`.
    pub fn alpha_q(&self) -> Option<f64> {
        let v = self.alpha_q_raw();
        (0.0..=1.0).contains(&v).then_some(v)
    }

    pub(crate) fn reaction_value(&self, alpha: f64) -> f64 {
        match self.p_prime(alpha) {
            Some(p) => self.pu_utility(p, alpha),
            // No stationary point: the utility is strictly decreasing, so the
            // interior-maximum value sits below zero for any positive power.
            None => -1.0,
        }
    }

    /// Root of `h(alpha) = u0(P'(alpha), alpha)` by bisection
    /// (200 iterations, `|h| <= 1e-10`).
    ///
    /// `Below` when `h(0) > 0` and `Above` when `h(1) < 0`; `h` is
    /// non-decreasing so the sign change is unique.
    pub fn alpha_tilde(&self) -> AlphaTilde {
        const TOL: f64 = 1e-10;
        let h0 = self.reaction_value(0.0);
        if h0 > 0.0 {
            return AlphaTilde::Below;
        }
        let h1 = self.reaction_value(1.0);
        if h1 < 0.0 {
            return AlphaTilde::Above;
        }
        if h0.abs() <= TOL {
            return AlphaTilde::Interior(0.0);
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut mid = 0.5 * (lo + hi);
        for _ in 0..200 {
            mid = 0.5 * (lo + hi);
            let hm = self.reaction_value(mid);
            if hm.abs() <= TOL {
                return AlphaTilde::Interior(mid);
            }
            if hm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        AlphaTilde::Interior(mid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sec3_params(c: f64) -> GameParams {
        GameParams::new(2.5, 1.0, c, 1.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn capacity_reference_points() {
        assert_eq!(capacity(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(capacity(1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(capacity(3.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(matches!(capacity(-0.5), Err(GameError::NegativeSnr(_))));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(GameParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(GameParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0).is_err());
        let p = GameParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(p.with_epsilon(2.0).is_err());
    }

    #[test]
    fn pu_utility_reference_values() {
        let p = sec3_params(3.5);
        assert_abs_diff_eq!(p.pu_utility(0.1307, 0.0), 0.0211, epsilon = 1e-3);
        assert_abs_diff_eq!(p.pu_utility(0.0667, 1.0), 0.0631, epsilon = 1e-3);
        assert_eq!(p.pu_utility(0.0, 0.7), 0.0);
    }

    #[test]
    fn secrecy_utility_clips_negative_bracket() {
        let p = GameParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.pu_utility_secrecy(1.0, 0.0), -p.gamma(), epsilon = 1e-15);
        let strong = sec3_params(3.5);
        assert_abs_diff_eq!(
            strong.pu_utility_secrecy(0.1307, 0.0),
            strong.pu_utility(0.1307, 0.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn su_utility_reference_values() {
        let p = sec3_params(5.0);
        assert_eq!(p.su_utility(0.3, 0.0), 0.0);
        // Direct arithmetic: C(5) - 1 = (1/2) log2(6) - 1.
        let expected = 0.5 * 6.0_f64.log2() - 1.0;
        assert_abs_diff_eq!(p.su_utility(0.0, 1.0), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(p.su_utility(0.0, 1.0), 0.2925, epsilon = 1e-4);
        // At p0 = Q the bracket vanishes for every alpha.
        let q = p.threshold_q();
        assert_abs_diff_eq!(p.su_utility(q, 0.37), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn threshold_q_reference_values() {
        assert_abs_diff_eq!(sec3_params(3.5).threshold_q(), 0.0667, epsilon = 1e-4);
        assert_abs_diff_eq!(sec3_params(5.0).threshold_q(), 0.2667, epsilon = 1e-4);
        // c p1_max = 2^(2 beta) - 1 makes the numerator term equal one.
        let p = GameParams::new(2.0, 1.0, 3.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.threshold_q(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn p_hat_reference_values() {
        let p = GameParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.p_hat(0.5), 0.7071, epsilon = 1e-3);
        assert_abs_diff_eq!(p.p_hat(1.0), -0.5, epsilon = 1e-12);
        assert_eq!(p.p_hat(0.0), f64::INFINITY);

        // Strong-primary regime: the boundary sits below zero for all alpha.
        let strong = sec3_params(3.5);
        for i in 1..=20 {
            let alpha = i as f64 / 20.0;
            assert!(strong.p_hat(alpha) < 0.0, "alpha = {alpha}");
        }
        assert_eq!(strong.p_hat(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn p_prime_reference_values() {
        let p = sec3_params(3.5);
        assert_abs_diff_eq!(p.p_prime(0.0).unwrap(), 0.1307, epsilon = 1e-4);
        assert_abs_diff_eq!(p.p_prime(1.0).unwrap(), 0.6, epsilon = 1e-6);
        // Dominant eavesdropper, no stationary point at alpha = 0.
        let weak = GameParams::new(1.0, 5.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(weak.p_prime(0.0), None);
    }

    #[test]
    fn p_star_prefers_silence_when_eavesdropper_dominates() {
        let weak = GameParams::new(1.0, 5.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(weak.p_star(0.0), 0.0);
        let strong = sec3_params(3.5);
        assert_abs_diff_eq!(strong.p_star(0.0), strong.p_prime(0.0).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn p_star_full_alpha_reference_values() {
        let p = GameParams::new(2.0, 1.0, 0.5, 0.2, 0.1, 4.5, 4.5).unwrap();
        assert_abs_diff_eq!(p.p_star_full_alpha(), 4.5, epsilon = 1e-12);
        let costly = GameParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(costly.p_star_full_alpha(), 0.0);
        // Matches the stationary point at alpha = 1 when unclamped.
        let q = sec3_params(5.0);
        assert_abs_diff_eq!(q.p_star_full_alpha(), q.p_prime(1.0).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn alpha_q_reference_values() {
        let p = sec3_params(5.0);
        let aq = p.alpha_q().unwrap();
        assert_abs_diff_eq!(aq, 0.3667, epsilon = 1e-3);
        // Defining identity P'(alpha_q) = Q.
        assert_abs_diff_eq!(p.p_prime(aq).unwrap(), p.threshold_q(), epsilon = 1e-8);
        assert_eq!(sec3_params(3.5).alpha_q(), None);
    }

    #[test]
    fn alpha_tilde_regimes() {
        assert_eq!(sec3_params(3.5).alpha_tilde(), AlphaTilde::Below);

        let weak = GameParams::new(1.0, 3.0, 1.0, 0.3, 1.0, 5.0, 1.0).unwrap();
        let at = weak.alpha_tilde().value().expect("interior root");
        assert!(weak.reaction_value(at).abs() <= 1e-9);

        // Scan oracle: the sign change of h sits in the same grid cell.
        let n = 10_000;
        let mut bracket = None;
        for i in 0..n {
            let a0 = i as f64 / n as f64;
            let a1 = (i + 1) as f64 / n as f64;
            if weak.reaction_value(a0) <= 0.0 && weak.reaction_value(a1) > 0.0 {
                bracket = Some((a0, a1));
                break;
            }
        }
        let (lo, hi) = bracket.expect("sign change");
        assert!(at >= lo - 1e-9 && at <= hi + 1e-9, "{at} not in [{lo}, {hi}]");
    }
}
