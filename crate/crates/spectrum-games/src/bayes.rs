//! Hidden eavesdropper-channel game: the primary holds an exponential belief
//! over the eavesdropper gain, maximizes its expected utility through the
//! exponential-integral closed form, and commits to a belief-based leader
//! strategy. Monte Carlo comparisons quantify what revealing the true gain is
//! worth to each player.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::game::{cap, GameParams, LN_4};
use crate::numeric::grid_then_golden_max;
use crate::stackelberg::{sep_strategy, Leader, StackelbergOutcome};

/// Exponential belief over the eavesdropper power gain (Rayleigh fading).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefModel {
    /// Mean gain; the density is `(1/b_bar) exp(-b / b_bar)`.
    pub b_bar: f64,
}

impl BeliefModel {
    /// Validates `b_bar > 0`.
    pub fn new(b_bar: f64) -> Result<Self> {
        if b_bar > 0.0 && b_bar.is_finite() {
            Ok(BeliefModel { b_bar })
        } else {
            Err(GameError::NonPositiveParameter {
                name: "b_bar",
                value: b_bar,
            })
        }
    }

    /// Probability density at `b >= 0`.
    pub fn density(&self, b: f64) -> f64 {
        if b < 0.0 {
            0.0
        } else {
            (-b / self.b_bar).exp() / self.b_bar
        }
    }

    /// Inverse-CDF sample from the belief.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        -self.b_bar * (-u).ln_1p()
    }
}

/// Side-by-side sample means for the revealed- and hidden-gain plays at one
/// sweep coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    /// Belief mean used for this record.
    pub b_bar: f64,
    /// Secondary channel gain used for this record.
    pub c: f64,
    /// Mean primary utility when the gain is revealed per realization.
    pub avg_u0_revealed: f64,
    /// Mean primary utility when the primary only knows the belief.
    pub avg_u0_hidden: f64,
    /// Mean secondary utility in the revealed case.
    pub avg_u1_revealed: f64,
    /// Mean secondary utility in the hidden case.
    pub avg_u1_hidden: f64,
    /// Number of gain realizations averaged.
    pub n_samples: usize,
    /// Seed of the sample stream.
    pub seed: u64,
}

/// Extended record with the standard error of the per-sample primary-utility
/// difference (revealed minus hidden), for verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonDetail {
    /// The means.
    pub record: ComparisonRecord,
    /// Standard error of `u0_revealed - u0_hidden`.
    pub se_u0_diff: f64,
}

/// Exponential integral `E1(x) = Int_x^inf exp(-t)/t dt` for `x > 0`.
///
/// Power series below one, continued fraction above; absolute error stays
/// within `1e-12` over the supported range.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(GameError::NonPositiveArgument(x));
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(e1_cf_scaled(x) * (-x).exp())
    }
}

/// Scaled exponential integral `exp(x) E1(x)`, safe for large `x` where the
/// bare integral underflows and the exponential overflows.
pub fn e1_scaled(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        e1_series(x) * x.exp()
    } else {
        e1_cf_scaled(x)
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn e1_series(x: f64) -> f64 {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!).
    let mut term = x;
    let mut sum = x;
    for k in 2..200 {
        let k = k as f64;
        term *= -x * (k - 1.0) / (k * k);
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

fn e1_cf_scaled(x: f64) -> f64 {
    // Modified Lentz evaluation of the continued fraction
    // E1(x) = exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Expected primary utility under the belief:
/// `C(a p0) - ((1 - alpha) / (2 ln 2)) exp(1/(b_bar p0)) E1(1/(b_bar p0)) -
/// gamma p0`, extended by continuity to zero at `p0 = 0`.
///
/// The eavesdropper gain field of `params` is ignored; the belief governs.
pub fn expected_pu_utility(
    params: &GameParams,
    belief: &BeliefModel,
    p0: f64,
    alpha: f64,
) -> f64 {
    debug_assert!(p0 >= 0.0 && (0.0..=1.0).contains(&alpha));
    if p0 == 0.0 {
        return 0.0;
    }
    let x = 1.0 / (belief.b_bar * p0);
    let eavesdrop = (1.0 - alpha) / LN_4 * e1_scaled(x);
    cap(params.a * p0) - eavesdrop - params.gamma() * p0
}

/// Belief-based best power `P_b(alpha)`: maximizes the expected utility over
/// `[0, p0_max]` by a 1000-point grid pre-scan plus golden-section refinement.
pub fn p_b(params: &GameParams, belief: &BeliefModel, alpha: f64) -> f64 {
    let (p, _) = grid_then_golden_max(
        |p0| expected_pu_utility(params, belief, p0, alpha),
        0.0,
        params.p0_max,
        1000,
        1e-8,
    );
    p
}

fn backed_off_power_full_alpha(params: &GameParams, q: f64) -> f64 {
    let slope = (params.a / (1.0 + params.a * (q - params.epsilon)) - params.gamma_bar) / LN_4;
    q - params.epsilon / slope.max(1.0)
}

/// Leader strategy when the gain is hidden: the primary-led case logic with
/// the reaction power replaced by `P_b` and the utility by its expectation.
/// The access threshold does not depend on the eavesdropper gain, so the
/// follower response is exact.
pub fn bayes_sep(params: &GameParams, belief: &BeliefModel) -> Result<StackelbergOutcome> {
    let q = params.threshold_q();
    let pb0 = p_b(params, belief, 0.0);
    let pb1 = p_b(params, belief, 1.0);

    let leader_power = if q <= 0.0 {
        pb0
    } else if q < pb0 {
        if params.epsilon >= q {
            return Err(GameError::EpsilonExceedsThreshold {
                epsilon: params.epsilon,
                q,
            });
        }
        let backed = backed_off_power_full_alpha(params, q);
        if expected_pu_utility(params, belief, backed, 1.0)
            >= expected_pu_utility(params, belief, pb0, 0.0)
        {
            backed
        } else {
            pb0
        }
    } else if q <= pb1 {
        if params.epsilon >= q {
            return Err(GameError::EpsilonExceedsThreshold {
                epsilon: params.epsilon,
                q,
            });
        }
        backed_off_power_full_alpha(params, q)
    } else {
        pb1
    };

    let follower = if leader_power < q { 1.0 } else { 0.0 };
    let expected_u0 = expected_pu_utility(params, belief, leader_power, follower);
    let expected_value = {
        // Guaranteed expected value over the mirrored candidate set.
        if q <= 0.0 {
            expected_pu_utility(params, belief, pb0, 0.0)
        } else if q < pb0 {
            expected_pu_utility(params, belief, q, 1.0)
                .max(expected_pu_utility(params, belief, pb0, 0.0))
        } else if q <= pb1 {
            expected_pu_utility(params, belief, q, 1.0)
        } else {
            expected_pu_utility(params, belief, pb1, 1.0)
        }
    };
    Ok(StackelbergOutcome {
        leader: Leader::Pu,
        leader_strategy: leader_power,
        follower_strategy: follower,
        utilities: crate::game::UtilityPair {
            u0: expected_u0,
            u1: params.su_utility(leader_power, follower),
        },
        leader_value: Some(expected_value),
        epsilon_used: params.epsilon,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample seed derivation; order-independent under parallel execution.
pub fn derive_seed(seed: u64, sweep_index: usize, sample_index: usize) -> u64 {
    let mixed = seed
        ^ splitmix64(sweep_index as u64 ^ 0xA076_1D64_78BD_642F)
        ^ splitmix64((sample_index as u64).wrapping_add(0xE703_7ED1_A0B4_28DB));
    splitmix64(mixed)
}

/// Monte Carlo comparison of revealed-gain and hidden-gain play over a
/// `(c, b_bar)` sweep. Each sample draws a gain from the belief, solves the
/// revealed-gain leader strategy at that gain, replays the fixed hidden-gain
/// leader strategy, and averages the realized utilities.
pub fn monte_carlo_compare(
    params: &GameParams,
    c_values: &[f64],
    b_bar_values: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<ComparisonRecord>> {
    Ok(monte_carlo_compare_detailed(params, c_values, b_bar_values, n_samples, seed)?
        .into_iter()
        .map(|d| d.record)
        .collect())
}

/// As [`monte_carlo_compare`], additionally reporting the standard error of
/// the primary-utility difference for verification purposes.
pub fn monte_carlo_compare_detailed(
    params: &GameParams,
    c_values: &[f64],
    b_bar_values: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<ComparisonDetail>> {
    assert!(n_samples >= 1, "n_samples must be at least 1");
    let mut out = Vec::with_capacity(c_values.len() * b_bar_values.len());
    for (ci, &c) in c_values.iter().enumerate() {
        for (bi, &b_bar) in b_bar_values.iter().enumerate() {
            let sweep_index = ci * b_bar_values.len() + bi;
            let mut swept = *params;
            swept.c = c;
            swept.validate()?;
            let belief = BeliefModel::new(b_bar)?;
            let hidden = bayes_sep(&swept, &belief)?;

            let mut sums = [0.0_f64; 4];
            let mut diff_sum = 0.0;
            let mut diff_sq_sum = 0.0;
            for k in 0..n_samples {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, sweep_index, k));
                let b = belief.sample(&mut rng);
                let mut realized = swept;
                realized.b = b;
                let revealed = sep_strategy(&realized)?;

                let u0_r = revealed.utilities.u0;
                let u1_r = revealed.utilities.u1;
                let u0_h = realized.pu_utility(hidden.leader_strategy, hidden.follower_strategy);
                let u1_h = realized.su_utility(hidden.leader_strategy, hidden.follower_strategy);
                sums[0] += u0_r;
                sums[1] += u0_h;
                sums[2] += u1_r;
                sums[3] += u1_h;
                let d = u0_r - u0_h;
                diff_sum += d;
                diff_sq_sum += d * d;
            }
            let n = n_samples as f64;
            let mean_diff = diff_sum / n;
            let var = ((diff_sq_sum / n) - mean_diff * mean_diff).max(0.0);
            let se = (var / n).sqrt();
            out.push(ComparisonDetail {
                record: ComparisonRecord {
                    b_bar,
                    c,
                    avg_u0_revealed: sums[0] / n,
                    avg_u0_hidden: sums[1] / n,
                    avg_u1_revealed: sums[2] / n,
                    avg_u1_hidden: sums[3] / n,
                    n_samples,
                    seed,
                },
                se_u0_diff: se,
            });
        }
    }
    Ok(out)
}
