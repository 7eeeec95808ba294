//! Classical Cournot duopoly with linear inverse demand and a common constant
//! marginal cost.

use serde::{Deserialize, Serialize};

use crate::error::{nonnegative, Error, Result};

/// Market constant `k = p - c` (price intercept minus marginal cost).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    k: f64,
}

impl GameParams {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Ok(Self { k })
        } else {
            Err(Error::InvalidMarket(k))
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

/// Production quantities of the two firms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub q1: f64,
    pub q2: f64,
}

impl StrategyPair {
    pub fn new(q1: f64, q2: f64) -> Result<Self> {
        Ok(Self { q1: nonnegative("q1", q1)?, q2: nonnegative("q2", q2)? })
    }
}

/// How the market-clearing price responds to total quantity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PriceRule {
    /// `P - c = k - Q`, allowed to go negative. All equilibrium algebra uses this.
    #[default]
    Linear,
    /// `P = max(p - Q, 0)`; needs the marginal cost to recover `p = k + c`.
    Clamped { cost: f64 },
}

/// Payoffs `q_i (k - q1 - q2)` under the linear price rule.
pub fn classical_payoff(params: GameParams, s: StrategyPair) -> (f64, f64) {
    payoff_from_quantities(params.k(), s.q1, s.q2)
}

pub fn classical_payoff_with(params: GameParams, s: StrategyPair, rule: PriceRule) -> (f64, f64) {
    match rule {
        PriceRule::Linear => classical_payoff(params, s),
        PriceRule::Clamped { cost } => {
            let p = params.k() + cost;
            let margin = (p - s.q1 - s.q2).max(0.0) - cost;
            (s.q1 * margin, s.q2 * margin)
        }
    }
}

/// Unvalidated payoff kernel, shared with the quantum game where measured
/// quantities are not guaranteed nonnegative.
pub(crate) fn payoff_from_quantities(k: f64, q1: f64, q2: f64) -> (f64, f64) {
    let margin = k - q1 - q2;
    (q1 * margin, q2 * margin)
}

/// Best response of a firm to the rival's quantity.
pub fn best_response(params: GameParams, rival: f64) -> f64 {
    ((params.k() - rival) / 2.0).max(0.0)
}

/// The symmetric Nash equilibrium `q* = k/3` and its payoff `k²/9`.
pub fn classical_nash(params: GameParams) -> (StrategyPair, f64) {
    let k = params.k();
    let q = k / 3.0;
    (StrategyPair { q1: q, q2: q }, k * k / 9.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(k: f64) -> GameParams {
        GameParams::new(k).unwrap()
    }

    #[test]
    fn payoff_examples() {
        let (u1, u2) = classical_payoff(g(1.0), StrategyPair::new(1.0 / 3.0, 1.0 / 3.0).unwrap());
        assert!((u1 - 1.0 / 9.0).abs() < 1e-15 && (u2 - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(classical_payoff(g(1.0), StrategyPair::new(0.0, 0.0).unwrap()), (0.0, 0.0));
        assert_eq!(classical_payoff(g(2.0), StrategyPair::new(1.0, 1.0).unwrap()), (0.0, 0.0));
    }

    #[test]
    fn overproduction_gives_negative_payoff_unless_clamped() {
        let s = StrategyPair::new(1.0, 2.0).unwrap();
        let (u1, u2) = classical_payoff(g(1.0), s);
        assert_eq!((u1, u2), (-2.0, -4.0));
        let (c1, c2) = classical_payoff_with(g(1.0), s, PriceRule::Clamped { cost: 0.5 });
        assert_eq!((c1, c2), (-0.5, -1.0));
        let below = StrategyPair::new(0.1, 0.2).unwrap();
        let (c1, c2) = classical_payoff_with(g(1.0), below, PriceRule::Clamped { cost: 0.5 });
        let (l1, l2) = classical_payoff(g(1.0), below);
        assert!((c1 - l1).abs() < 1e-15 && (c2 - l2).abs() < 1e-15);
    }

    #[test]
    fn nash_examples() {
        for &(k, q, u) in &[(1.0, 1.0 / 3.0, 1.0 / 9.0), (3.0, 1.0, 1.0), (0.5, 1.0 / 6.0, 1.0 / 36.0)] {
            let (s, payoff) = classical_nash(g(k));
            assert!((s.q1 - q).abs() < 1e-15 && (s.q2 - q).abs() < 1e-15);
            assert!((payoff - u).abs() < 1e-15);
        }
    }

    #[test]
    fn validation() {
        assert!(GameParams::new(0.0).is_err());
        assert!(GameParams::new(-1.0).is_err());
        assert!(GameParams::new(f64::NAN).is_err());
        assert!(StrategyPair::new(-0.1, 0.0).is_err());
        assert!(StrategyPair::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn nash_is_a_best_response_fixed_point() {
        let p = g(1.7);
        let (s, _) = classical_nash(p);
        assert!((best_response(p, s.q2) - s.q1).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn unilateral_deviation_strictly_hurts(k in 0.01f64..100.0, frac in -1.0f64..1.0) {
            prop_assume!(frac.abs() > 1e-3);
            let p = g(k);
            let (s, u_star) = classical_nash(p);
            let eps = frac * k / 6.0;
            let dev1 = StrategyPair { q1: s.q1 + eps, q2: s.q2 };
            let dev2 = StrategyPair { q1: s.q1, q2: s.q2 + eps };
            prop_assert!(classical_payoff(p, dev1).0 < u_star);
            prop_assert!(classical_payoff(p, dev2).1 < u_star);
        }

        #[test]
        fn nash_scales_with_k(k in 0.01f64..50.0, lambda in 0.01f64..50.0) {
            let (s, u) = classical_nash(g(k));
            let (sl, ul) = classical_nash(g(lambda * k));
            prop_assert!((sl.q1 - lambda * s.q1).abs() <= 1e-12 * sl.q1);
            prop_assert!((ul - lambda * lambda * u).abs() <= 1e-12 * ul);
        }

        #[test]
        fn payoff_swaps_under_player_exchange(k in 0.1f64..10.0, x in 0.0f64..10.0, y in 0.0f64..10.0) {
            let (a, b) = classical_payoff(g(k), StrategyPair { q1: x, q2: y });
            let (c, d) = classical_payoff(g(k), StrategyPair { q1: y, q2: x });
            let tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
            prop_assert!((a - d).abs() <= tol && (b - c).abs() <= tol);
        }
    }
}
