//! Property tests for the structural invariants of the game primitives and
//! solvers, checked against independent grid oracles.

use proptest::prelude::*;
use spectrum_games::{
    capacity, followers_cascade, pu_best_response, pu_utility_multi, solve_nash,
    su_utility_multi, threshold_qi, DecodingOrder, EquilibriumStrategy, GameParams, MultiGame,
    PuProfile, SuProfile,
};

/// Independent oracle: exhaustive maximum of `f` over an inclusive grid.
fn grid_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let mut best = (lo, f(lo));
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

fn params_strategy(weak: bool) -> impl Strategy<Value = GameParams> {
    (
        0.3f64..4.0,   // a
        0.05f64..3.0,  // b offset / scale
        0.3f64..8.0,   // c
        0.1f64..1.5,   // gamma_bar
        0.1f64..2.0,   // beta
        0.5f64..4.0,   // p0_max
        0.3f64..2.0,   // p1_max
    )
        .prop_map(move |(a, b_raw, c, gamma_bar, beta, p0_max, p1_max)| {
            let b = if weak { a + b_raw } else { (a - b_raw).max(0.02) };
            GameParams::new(a, b, c, gamma_bar, beta, p0_max, p1_max).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn capacity_is_concave(x in 0.0f64..50.0, y in 0.0f64..50.0) {
        let mid = capacity((x + y) / 2.0).unwrap();
        let avg = (capacity(x).unwrap() + capacity(y).unwrap()) / 2.0;
        prop_assert!(mid >= avg - 1e-12);
    }

    #[test]
    fn pu_utility_nondecreasing_in_alpha(
        params in params_strategy(false),
        p0_frac in 0.0f64..1.0,
        a1 in 0.0f64..1.0,
        a2 in 0.0f64..1.0,
    ) {
        let p0 = p0_frac * params.p0_max;
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        prop_assert!(params.pu_utility(p0, hi) >= params.pu_utility(p0, lo));
    }

    #[test]
    fn su_utility_sign_matches_threshold(
        params in params_strategy(false),
        p0_frac in 0.0f64..1.0,
        alpha in 0.0f64..1.0,
    ) {
        let p0 = p0_frac * params.p0_max;
        let q = params.threshold_q();
        let u1 = params.su_utility(p0, alpha);
        if alpha > 1e-12 && (p0 - q).abs() > 1e-9 {
            prop_assert_eq!(u1 > 0.0, p0 < q, "u1 = {}, p0 = {}, q = {}", u1, p0, q);
        }
    }

    #[test]
    fn p_prime_is_monotone_in_alpha(params in params_strategy(false), a1 in 0.0f64..1.0, a2 in 0.0f64..1.0) {
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        if let (Some(p_lo), Some(p_hi)) = (params.p_prime(lo), params.p_prime(hi)) {
            prop_assert!(p_hi >= p_lo - 1e-9);
        }
    }

    #[test]
    fn p_hat_negative_in_strong_regime(params in params_strategy(false), alpha in 0.01f64..1.0) {
        prop_assert!(params.p_hat(alpha) < 0.0);
    }

    #[test]
    fn p_star_beats_grid_oracle(params in params_strategy(false), alpha in 0.0f64..1.0) {
        let best = params.p_star(alpha);
        let (_, grid_val) = grid_argmax(|p| params.pu_utility(p, alpha), 0.0, params.p0_max, 4000);
        prop_assert!(params.pu_utility(best, alpha) >= grid_val - 1e-6);
    }

    #[test]
    fn p_star_beats_grid_oracle_weak(params in params_strategy(true), alpha in 0.0f64..1.0) {
        let best = params.p_star(alpha);
        let (_, grid_val) = grid_argmax(|p| params.pu_utility(p, alpha), 0.0, params.p0_max, 4000);
        prop_assert!(params.pu_utility(best, alpha) >= grid_val - 1e-6);
    }

    #[test]
    fn secrecy_and_plain_utilities_share_maximizers(
        params in params_strategy(true),
        alpha in 0.0f64..1.0,
    ) {
        // Grid argmax of the clipped utility agrees with the plain argmax in
        // value after clipping.
        let (_, clipped_best) =
            grid_argmax(|p| params.pu_utility_secrecy(p, alpha), 0.0, params.p0_max, 4000);
        let best = params.p_star(alpha);
        prop_assert!(params.pu_utility_secrecy(best, alpha) >= clipped_best - 1e-6);
    }

    #[test]
    fn p_prime_inverts_alpha_q(params in params_strategy(false)) {
        // Clamping must not interfere with the defining identity.
        let mut p = params;
        p.p0_max = p.p0_max.max(1.0 / p.gamma_bar);
        let q = p.threshold_q();
        if let Some(alpha_q) = p.alpha_q() {
            if q >= 0.0 && q <= p.p0_max {
                let back = p.p_prime(alpha_q).expect("stationary point at alpha_q");
                prop_assert!((back - q).abs() <= 1e-8, "back = {}, q = {}", back, q);
            }
        }
    }

    #[test]
    fn p_star_full_alpha_matches_p_prime(params in params_strategy(false)) {
        let closed = params.p_star_full_alpha();
        if closed > 0.0 && closed < params.p0_max {
            let stationary = params.p_prime(1.0).expect("real root at alpha = 1");
            prop_assert!((closed - stationary).abs() <= 1e-9);
        }
    }

    #[test]
    fn pu_best_response_beats_grid(params in params_strategy(true), alpha in 0.0f64..1.0) {
        let response = pu_best_response(&params, alpha);
        let canonical = response.canonical();
        let achieved = params.pu_utility(canonical, alpha);
        let (_, grid_val) = grid_argmax(|p| params.pu_utility(p, alpha), 0.0, params.p0_max, 4000);
        prop_assert!(achieved >= grid_val - 1e-6);
    }

    #[test]
    fn nash_case_partition_is_total(params in params_strategy(false), weak in params_strategy(true)) {
        // Exactly one case fires per draw, and expected secondary utility
        // vanishes whenever the fraction stays below one.
        for p in [&params, &weak] {
            let outcome = solve_nash(p).unwrap();
            let alpha = outcome.strategies.su_expected_alpha();
            if alpha < 1.0 {
                prop_assert!(outcome.utilities.u1.abs() <= 1e-9);
            }
            if let EquilibriumStrategy::Mixed(m) = &outcome.strategies {
                let total: f64 = m.pu_support.iter().map(|&(_, w)| w).sum();
                prop_assert!((total - 1.0).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn multi_reduces_to_two_player_along_deterministic_draws() {
    // N = 1 agreement between the multi-user operations and their
    // two-player counterparts, checked pointwise at machine precision.
    for k in 0..50 {
        let t = k as f64 / 50.0;
        let pu = PuProfile {
            a: 0.5 + 3.0 * t,
            gamma_bar: 0.15 + t,
            p0_max: 1.0 + 3.0 * t,
            epsilon: 1e-3,
        };
        let su = SuProfile {
            id: "only".into(),
            b: 0.1 + 4.0 * t,
            c: 0.4 + 5.0 * t,
            p_max: 0.5 + 1.5 * t,
            beta: 0.2 + 1.2 * t,
        };
        let game = MultiGame::new(pu, vec![su], None).unwrap();
        let two = game.two_player(0);

        for i in 0..=10 {
            let p0 = game.pu.p0_max * i as f64 / 10.0;
            for alpha in [0.0, 0.3, 1.0] {
                let (u0, _) = pu_utility_multi(&game, p0, &[alpha]);
                assert!((u0 - two.pu_utility(p0, alpha)).abs() <= 1e-12);
                let u1 = su_utility_multi(&game, 0, p0, &[alpha]);
                assert!((u1 - two.su_utility(p0, alpha)).abs() <= 1e-12);
            }
            assert!((threshold_qi(&game, 0, &[1.0]) - two.threshold_q()).abs() <= 1e-12);
            let cascade = followers_cascade(&game, p0);
            let expected = if p0 < two.threshold_q() { 1.0 } else { 0.0 };
            assert_eq!(cascade[0], expected);
        }
    }
}

#[test]
fn threshold_qi_nonincreasing_in_higher_priority_activity() {
    let pu = PuProfile {
        a: 2.0,
        gamma_bar: 0.2,
        p0_max: 4.5,
        epsilon: 1e-3,
    };
    let sus: Vec<SuProfile> = (0..4)
        .map(|i| SuProfile {
            id: format!("su-{i}"),
            b: 1.5 - 0.2 * i as f64,
            c: 0.5,
            p_max: 4.5,
            beta: 0.1,
        })
        .collect();
    let game = MultiGame::new(pu, sus, Some(DecodingOrder::identity(4))).unwrap();
    let mut alphas = vec![0.0; 4];
    let mut prev = threshold_qi(&game, 3, &alphas);
    for j in 0..3 {
        alphas[j] = 1.0;
        let q = threshold_qi(&game, 3, &alphas);
        assert!(q < prev);
        prev = q;
    }
    // Uniform closed form at rank r with all-ones decisions:
    // (1/a)(k1/(2^(2 k2) - 1) - 1 - (r - 1) k1).
    let k1 = 0.5 * 4.5;
    let all = vec![1.0; 4];
    for r in 0..4 {
        let expected = (k1 / (2f64.powf(0.2) - 1.0) - 1.0 - r as f64 * k1) / 2.0;
        assert!((threshold_qi(&game, r, &all) - expected).abs() <= 1e-9);
    }
}
