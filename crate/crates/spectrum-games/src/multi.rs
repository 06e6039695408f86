//! Multi-secondary-user game: per-user utilities and access thresholds under
//! a successive-interference-cancellation decoding order, the follower
//! cascade induced by a committed primary power, the uniform-parameter
//! optimal order, the iterative spectrum-grant algorithm, and brute-force
//! oracles over orders and simultaneous equilibria.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{cap, GameParams};

/// One secondary user's channel and cost profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuProfile {
    /// Stable identifier.
    pub id: String,
    /// Eavesdropper-channel power gain (> 0).
    pub b: f64,
    /// Secondary-channel power gain (> 0).
    pub c: f64,
    /// Transmit power, used in full whenever transmitting (> 0).
    pub p_max: f64,
    /// Energy cost per unit transmission time (> 0).
    pub beta: f64,
}

impl SuProfile {
    fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("b", self.b),
            ("c", self.c),
            ("p_max", self.p_max),
            ("beta", self.beta),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(GameError::NonPositiveParameter { name, value });
            }
        }
        Ok(())
    }
}

/// Primary-side parameters of the multi-user game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PuProfile {
    /// Primary-channel power gain (> 0).
    pub a: f64,
    /// Scaled power cost `gamma_bar = gamma * ln 4` (> 0).
    pub gamma_bar: f64,
    /// Maximum primary power (> 0).
    pub p0_max: f64,
    /// Leader backoff (> 0).
    pub epsilon: f64,
}

/// Decoding order: `priority[0]` is the highest-priority user (decoded last,
/// interference-free among the secondaries). Entries index into
/// [`MultiGame::sus`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingOrder {
    /// Permutation of secondary-user indices, highest priority first.
    pub priority: Vec<usize>,
}

impl DecodingOrder {
    /// Identity order over `n` users.
    pub fn identity(n: usize) -> Self {
        DecodingOrder {
            priority: (0..n).collect(),
        }
    }

    /// Higher-priority set `N'(i)`: indices decoded after user `i`, whose
    /// signals interfere while `i` is decoded.
    pub fn higher_priority(&self, i: usize) -> &[usize] {
        let rank = self
            .priority
            .iter()
            .position(|&j| j == i)
            .expect("index in order");
        &self.priority[..rank]
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.priority.len() != n {
            return Err(GameError::InvalidOrder);
        }
        let mut seen = vec![false; n];
        for &i in &self.priority {
            if i >= n || seen[i] {
                return Err(GameError::InvalidOrder);
            }
            seen[i] = true;
        }
        Ok(())
    }
}

/// The multi-user game: primary parameters, SU profiles and a decoding order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiGame {
    /// Primary-side parameters.
    pub pu: PuProfile,
    /// Secondary users, in declaration order.
    pub sus: Vec<SuProfile>,
    /// Decoding order over `sus`.
    pub order: DecodingOrder,
}

/// Spectrum-grant outcome: committed primary power, the induced decisions
/// and the utilities they generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiOutcome {
    /// Committed primary power.
    pub p0_sep: f64,
    /// Cascade-consistent transmit decisions (0 or 1 per user).
    pub alphas: Vec<f64>,
    /// Indices of users granted spectrum, `{i : alphas[i] = 1}`.
    pub allowed_sus: Vec<usize>,
    /// Primary utility at the outcome.
    pub u0_sep: f64,
    /// Per-user secondary utilities at the outcome.
    pub su_utilities: Vec<f64>,
    /// Decoding order the outcome was computed under.
    pub order: DecodingOrder,
}

impl MultiGame {
    /// Validates parameters, unique ids and the order permutation.
    pub fn new(pu: PuProfile, sus: Vec<SuProfile>, order: Option<DecodingOrder>) -> Result<Self> {
        for (name, value) in [
            ("a", pu.a),
            ("gamma_bar", pu.gamma_bar),
            ("p0_max", pu.p0_max),
            ("epsilon", pu.epsilon),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(GameError::NonPositiveParameter { name, value });
            }
        }
        let mut ids = BTreeSet::new();
        for su in &sus {
            su.validate()?;
            if !ids.insert(su.id.clone()) {
                return Err(GameError::DuplicateSuId(su.id.clone()));
            }
        }
        let order = order.unwrap_or_else(|| DecodingOrder::identity(sus.len()));
        order.validate(sus.len())?;
        Ok(MultiGame { pu, sus, order })
    }

    /// Per-unit power cost `gamma_bar / ln 4`.
    pub fn gamma(&self) -> f64 {
        self.pu.gamma_bar / crate::game::LN_4
    }

    /// The game restricted to one secondary user, as two-player parameters.
    pub fn two_player(&self, i: usize) -> GameParams {
        let su = &self.sus[i];
        GameParams {
            a: self.pu.a,
            b: su.b,
            c: su.c,
            gamma_bar: self.pu.gamma_bar,
            beta: su.beta,
            p0_max: self.pu.p0_max,
            p1_max: su.p_max,
            epsilon: self.pu.epsilon,
        }
    }

    /// Best primary power under full secondary transmission.
    pub fn p_star_full_alpha(&self) -> f64 {
        (1.0 / self.pu.gamma_bar - 1.0 / self.pu.a)
            .max(0.0)
            .min(self.pu.p0_max)
    }

    /// Replaces the decoding order.
    pub fn with_order(&self, order: DecodingOrder) -> Result<Self> {
        order.validate(self.sus.len())?;
        let mut game = self.clone();
        game.order = order;
        Ok(game)
    }

    /// Priority order by descending eavesdropper gain (stable on ties).
    pub fn descending_b_order(&self) -> DecodingOrder {
        let mut idx: Vec<usize> = (0..self.sus.len()).collect();
        idx.sort_by(|&i, &j| self.sus[j].b.partial_cmp(&self.sus[i].b).unwrap());
        DecodingOrder { priority: idx }
    }
}

/// Primary utility against the worst eavesdropper:
/// `C(a p0) - max_i (1 - alpha_i) C(b_i p0) - gamma p0`.
///
/// Also reports which user dominates the eavesdropping term, when any term is
/// positive.
pub fn pu_utility_multi(game: &MultiGame, p0: f64, alphas: &[f64]) -> (f64, Option<usize>) {
    debug_assert_eq!(alphas.len(), game.sus.len());
    let mut worst = 0.0_f64;
    let mut dominating = None;
    for (i, su) in game.sus.iter().enumerate() {
        let term = (1.0 - alphas[i]) * cap(su.b * p0);
        if term > worst {
            worst = term;
            dominating = Some(i);
        }
    }
    (cap(game.pu.a * p0) - worst - game.gamma() * p0, dominating)
}

/// Secondary utility of user `i` under the game's decoding order:
/// transmissions of higher-priority users add interference.
pub fn su_utility_multi(game: &MultiGame, i: usize, p0: f64, alphas: &[f64]) -> f64 {
    let su = &game.sus[i];
    let interference: f64 = game
        .order
        .higher_priority(i)
        .iter()
        .map(|&j| alphas[j] * game.sus[j].c * game.sus[j].p_max)
        .sum();
    let snr = su.c * su.p_max / (1.0 + game.pu.a * p0 + interference);
    alphas[i] * (cap(snr) - su.beta)
}

/// Access threshold of user `i` given the other users' decisions:
/// `(1/a) (c_i p_max_i / (2^(2 beta_i) - 1) - 1 - sum over higher priority of
/// alpha_j c_j p_max_j)`.
pub fn threshold_qi(game: &MultiGame, i: usize, alphas: &[f64]) -> f64 {
    let su = &game.sus[i];
    let interference: f64 = game
        .order
        .higher_priority(i)
        .iter()
        .map(|&j| alphas[j] * game.sus[j].c * game.sus[j].p_max)
        .sum();
    (su.c * su.p_max / ((2.0 * su.beta).exp2() - 1.0) - 1.0 - interference) / game.pu.a
}

/// Follower equilibrium for a committed primary power: users decide in
/// priority order, transmitting exactly when the power sits strictly below
/// their threshold given the already-resolved higher-priority decisions.
/// Equality resolves to eavesdropping.
pub fn followers_cascade(game: &MultiGame, p0: f64) -> Vec<f64> {
    let mut alphas = vec![0.0; game.sus.len()];
    for &i in &game.order.priority {
        let q_i = threshold_qi(game, i, &alphas);
        alphas[i] = if p0 < q_i { 1.0 } else { 0.0 };
    }
    alphas
}

fn uniformity(game: &MultiGame) -> Option<String> {
    const TOL: f64 = 1e-12;
    if game.sus.len() < 2 {
        return None;
    }
    let k1 = game.sus[0].c * game.sus[0].p_max;
    let k2 = game.sus[0].beta;
    for su in &game.sus[1..] {
        if (su.c * su.p_max - k1).abs() > TOL {
            return Some(format!(
                "c*p_max mismatch: {} vs {}",
                su.c * su.p_max,
                k1
            ));
        }
        if (su.beta - k2).abs() > TOL {
            return Some(format!("beta mismatch: {} vs {}", su.beta, k2));
        }
    }
    None
}

/// Optimal decoding order for uniform secondary parameters: highest priority
/// to the strongest eavesdropper (descending gain, stable on ties).
///
/// Errors on non-uniform parameters; use [`brute_force_order`] there.
pub fn optimal_order_uniform(game: &MultiGame) -> Result<DecodingOrder> {
    if let Some(detail) = uniformity(game) {
        return Err(GameError::NonUniformParameters(detail));
    }
    Ok(game.descending_b_order())
}

/// Builds the cascade-consistent outcome at a committed power.
pub fn outcome_at(game: &MultiGame, p0: f64) -> MultiOutcome {
    let alphas = followers_cascade(game, p0);
    let (u0, _) = pu_utility_multi(game, p0, &alphas);
    let su_utilities = (0..game.sus.len())
        .map(|i| su_utility_multi(game, i, p0, &alphas))
        .collect();
    let allowed_sus = alphas
        .iter()
        .enumerate()
        .filter_map(|(i, &a)| (a == 1.0).then_some(i))
        .collect();
    MultiOutcome {
        p0_sep: p0,
        alphas,
        allowed_sus,
        u0_sep: u0,
        su_utilities,
        order: game.order.clone(),
    }
}

/// Iterative spectrum-grant algorithm under the descending-gain priority
/// order.
///
/// Walks the users from the strongest eavesdropper down, comparing the
/// primary utility of backing off below each all-transmitting threshold
/// against holding the single-user optimal power, and accumulates the grant
/// set. Returns the cascade-consistent outcome at the selected power. When
/// every threshold clears the full-transmission optimum the search
/// short-circuits to that optimum with every user granted.
///
/// Non-uniform parameters are permitted with a warning; the descending-gain
/// order is then a heuristic.
pub fn grant_algorithm(game: &MultiGame) -> Result<MultiOutcome> {
    let ordered = game.with_order(game.descending_b_order())?;
    if let Some(detail) = uniformity(&ordered) {
        log::warn!("non-uniform secondary parameters ({detail}); descending-gain order is heuristic");
    }
    let n = ordered.sus.len();
    let ps1 = ordered.p_star_full_alpha();
    if n == 0 {
        return Ok(outcome_at(&ordered, ps1));
    }

    let all_ones = vec![1.0; n];
    // Thresholds with every user transmitting, per priority rank.
    let q_all: Vec<f64> = ordered
        .order
        .priority
        .iter()
        .map(|&i| threshold_qi(&ordered, i, &all_ones))
        .collect();

    let Some(start_rank) = (0..n).find(|&r| q_all[r] < ps1) else {
        // Every threshold clears the full-transmission optimum.
        return Ok(outcome_at(&ordered, ps1));
    };

    // Primary utility when ranks 0..=r transmit and rank r+1 dominates.
    let u0_next = |rank: usize, p0: f64| -> f64 {
        if rank + 1 < n {
            ordered.two_player(ordered.order.priority[rank + 1]).pu_utility(p0, 0.0)
        } else {
            cap(ordered.pu.a * p0) - ordered.gamma() * p0
        }
    };

    let epsilon = ordered.pu.epsilon;
    let mut p0_sep = 0.0_f64;
    let mut u0_sep = 0.0_f64;
    for rank in start_rank..n {
        let i = ordered.order.priority[rank];
        let q_i = q_all[rank];
        let two = ordered.two_player(i);
        let p_i0 = two.p_star(0.0);
        if q_i >= p_i0 {
            let p = q_i - epsilon;
            if p >= 0.0 {
                p0_sep = p;
                u0_sep = u0_next(rank, p);
            }
        } else {
            let q_prev = if rank == 0 { f64::INFINITY } else { q_all[rank - 1] };
            let u_hold = two.pu_utility(p_i0, 0.0);
            if u_hold >= u0_sep && p_i0 <= q_prev {
                p0_sep = p_i0;
                u0_sep = u_hold;
            }
            let p = q_i - epsilon;
            if p >= 0.0 {
                let u_back = u0_next(rank, p);
                if u_back >= u0_sep {
                    p0_sep = p;
                    u0_sep = u_back;
                }
            }
        }
    }
    Ok(outcome_at(&ordered, p0_sep))
}

/// Maximum user count accepted by the factorial order search.
pub const MAX_BRUTE_FORCE_USERS: usize = 8;

/// Exhaustive decoding-order search: for each permutation, maximize the
/// primary utility over the candidate powers (thresholds with backoff,
/// single-user optima, the full-transmission optimum and a `grid_n`-point
/// safety scan), with follower-cascade responses. Returns the order and
/// outcome with the highest equilibrium utility.
pub fn brute_force_order(game: &MultiGame, grid_n: usize) -> Result<(DecodingOrder, MultiOutcome)> {
    let n = game.sus.len();
    if n > MAX_BRUTE_FORCE_USERS {
        return Err(GameError::TooManyUsers {
            n,
            max: MAX_BRUTE_FORCE_USERS,
        });
    }
    let mut best: Option<(DecodingOrder, MultiOutcome)> = None;
    for perm in (0..n).permutations(n) {
        let candidate = best_power_for_order(game, DecodingOrder { priority: perm }, grid_n)?;
        match &best {
            Some((_, incumbent)) if candidate.1.u0_sep <= incumbent.u0_sep => {}
            _ => best = Some(candidate),
        }
    }
    best.ok_or(GameError::Internal("permutation search over empty game"))
}

fn best_power_for_order(
    game: &MultiGame,
    order: DecodingOrder,
    grid_n: usize,
) -> Result<(DecodingOrder, MultiOutcome)> {
    let ordered = game.with_order(order.clone())?;
    let n = ordered.sus.len();
    let all_ones = vec![1.0; n];
    let epsilon = ordered.pu.epsilon;

    let mut candidates = vec![ordered.p_star_full_alpha()];
    for i in 0..n {
        let q_i = threshold_qi(&ordered, i, &all_ones);
        if q_i - epsilon >= 0.0 {
            candidates.push((q_i - epsilon).min(ordered.pu.p0_max));
        }
        candidates.push(ordered.two_player(i).p_star(0.0));
    }
    let grid_n = grid_n.max(2);
    for k in 0..=grid_n {
        candidates.push(ordered.pu.p0_max * k as f64 / grid_n as f64);
    }
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut best: Option<MultiOutcome> = None;
    for &p0 in &candidates {
        let outcome = outcome_at(&ordered, p0);
        match &best {
            Some(incumbent) if outcome.u0_sep <= incumbent.u0_sep => {}
            _ => best = Some(outcome),
        }
    }
    Ok((order, best.expect("nonempty candidate set")))
}

/// Simultaneous-move equilibria located by synchronous best-response
/// iteration from the all-ones and all-zeros starts.
///
/// A run converges when the state repeats on two consecutive rounds;
/// non-converging starts are skipped. Distinct fixed points are returned as
/// cascade-style outcomes evaluated at the fixed state.
pub fn simultaneous_ne(game: &MultiGame, max_rounds: usize) -> Vec<MultiOutcome> {
    let n = game.sus.len();
    let mut found: Vec<MultiOutcome> = Vec::new();
    for start_one in [true, false] {
        let mut alphas = vec![if start_one { 1.0 } else { 0.0 }; n];
        let mut p0 = pu_response(game, &alphas);
        let mut converged = false;
        for _ in 0..max_rounds {
            let next_alphas: Vec<f64> = (0..n)
                .map(|i| {
                    if p0 < threshold_qi(game, i, &alphas) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            let next_p0 = pu_response(game, &next_alphas);
            if next_alphas == alphas && (next_p0 - p0).abs() <= 1e-12 {
                converged = true;
                break;
            }
            alphas = next_alphas;
            p0 = next_p0;
        }
        if !converged {
            continue;
        }
        let (u0, _) = pu_utility_multi(game, p0, &alphas);
        let outcome = MultiOutcome {
            p0_sep: p0,
            alphas: alphas.clone(),
            allowed_sus: alphas
                .iter()
                .enumerate()
                .filter_map(|(i, &a)| (a == 1.0).then_some(i))
                .collect(),
            u0_sep: u0,
            su_utilities: (0..n)
                .map(|i| su_utility_multi(game, i, p0, &alphas))
                .collect(),
            order: game.order.clone(),
        };
        let duplicate = found.iter().any(|o| {
            (o.p0_sep - outcome.p0_sep).abs() <= 1e-9 && o.alphas == outcome.alphas
        });
        if !duplicate {
            found.push(outcome);
        }
    }
    found
}

fn pu_response(game: &MultiGame, alphas: &[f64]) -> f64 {
    // Against fixed binary decisions the worst eavesdropper is fixed, so the
    // response reduces to the two-player best power.
    let strongest_listener = game
        .sus
        .iter()
        .enumerate()
        .filter(|&(i, _)| alphas[i] < 1.0)
        .max_by(|(_, x), (_, y)| x.b.partial_cmp(&y.b).unwrap())
        .map(|(i, _)| i);
    match strongest_listener {
        Some(i) => game.two_player(i).p_star(0.0),
        None => game.p_star_full_alpha(),
    }
}
