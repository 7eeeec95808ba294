//! Quantum payoffs and Nash equilibria.
//!
//! After the entangle / displace / disentangle protocol the measured
//! quantities are linear in the displacements,
//!
//! ```text
//! q̃₁ = [(z1 + z2) x₁ + (z1 − z2) x₂] / 4
//! q̃₂ = [(z1 + z2) x₂ + (z1 − z2) x₁] / 4
//! ```
//!
//! so the whole game is governed by the two positive numbers `z1`, `z2`. The
//! first-order conditions give the symmetric equilibrium
//! `x* = k(z1 + z2) / (z1(2z1 + z2))` with payoff `(k²/2)(z − z²)`,
//! `z = z1/(2z1 + z2) ∈ (0, 1/2)`, which can never exceed `k²/8`.

use serde::Serialize;

use crate::entangler::{derive_coefficients, EntanglerParams};
use crate::error::{nonnegative, Result};
use crate::game::{payoff_from_quantities, GameParams};
use crate::special::scaled_cosh_sinhc;

/// Displacement amplitudes chosen by the two players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumStrategyPair {
    pub x1: f64,
    pub x2: f64,
}

impl QuantumStrategyPair {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        Ok(Self { x1: nonnegative("x1", x1)?, x2: nonnegative("x2", x2)? })
    }

    pub fn symmetric(x: f64) -> Result<Self> {
        Self::new(x, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NashResult {
    /// Common equilibrium strategy `x̃₁* = x̃₂*`.
    pub x_star: f64,
    /// Common equilibrium payoff.
    pub payoff: f64,
    /// `z1 / (2 z1 + z2)`.
    pub z: f64,
    /// Measured equilibrium quantity `q̃₁* = q̃₂*`.
    pub q_star: f64,
    /// Set when the equilibrium quantity comes out negative. The value is
    /// reported as computed, never clamped.
    pub negative_quantity: bool,
}

/// `(z1, z2)` scaled by a common factor `e^{-shift}` so that large squeezing
/// does not overflow. Returns `(z1 e^{-shift}, z2 e^{-shift}, shift)`.
fn scaled_z(p: EntanglerParams) -> (f64, f64, f64) {
    let a = p.rate_a();
    let b = p.rate_b();
    let m = a.max(b);
    let shift = if m > 20.0 { m } else { 0.0 };
    (scaled_cosh_sinhc(p.lambda_plus(), shift), scaled_cosh_sinhc(p.lambda_minus(), shift), shift)
}

/// Measured quantities `(q̃₁, q̃₂)` for the given displacements.
pub fn quantities(p: EntanglerParams, s: QuantumStrategyPair) -> (f64, f64) {
    let z1 = scaled_cosh_sinhc(p.lambda_plus(), 0.0);
    let z2 = scaled_cosh_sinhc(p.lambda_minus(), 0.0);
    quantities_from_z(z1, z2, s.x1, s.x2)
}

pub(crate) fn quantities_from_z(z1: f64, z2: f64, x1: f64, x2: f64) -> (f64, f64) {
    (0.25 * ((z1 + z2) * x1 + (z1 - z2) * x2), 0.25 * ((z1 + z2) * x2 + (z1 - z2) * x1))
}

/// Quantum payoffs `ũᵢ = q̃ᵢ (k − q̃₁ − q̃₂)`.
pub fn quantum_payoffs(k: GameParams, p: EntanglerParams, s: QuantumStrategyPair) -> (f64, f64) {
    let (q1, q2) = quantities(p, s);
    payoff_from_quantities(k.k(), q1, q2)
}

/// The same payoffs in factored form,
/// `ũ₁ = (2k − z1(x₁+x₂))(z2(x₁−x₂) + z1(x₁+x₂)) / 8` and its mirror.
pub fn quantum_payoffs_expanded(k: GameParams, p: EntanglerParams, s: QuantumStrategyPair) -> (f64, f64) {
    let c = derive_coefficients(p);
    let (z1, z2, k) = (c.z1, c.z2, k.k());
    let sum = s.x1 + s.x2;
    let diff = s.x1 - s.x2;
    let market = 2.0 * k - z1 * sum;
    (market * (z2 * diff + z1 * sum) / 8.0, market * (-z2 * diff + z1 * sum) / 8.0)
}

fn nash_from_scaled(k: f64, z1: f64, z2: f64, shift: f64) -> NashResult {
    let denom = 2.0 * z1 + z2;
    let z = z1 / denom;
    let x_star = (-shift).exp() * k * (z1 + z2) / (z1 * denom);
    let q_star = 0.5 * k * (z1 + z2) / denom;
    NashResult { x_star, payoff: 0.5 * k * k * (z - z * z), z, q_star, negative_quantity: q_star < 0.0 }
}

/// Nash equilibrium of the two-parameter game.
pub fn nash_two_param(k: GameParams, p: EntanglerParams) -> NashResult {
    let (z1, z2, shift) = scaled_z(p);
    nash_from_scaled(k.k(), z1, z2, shift)
}

/// Nash equilibrium of the one-parameter game (`α = 0`, `ξ = βe^{iθ}`).
///
/// The payoff is evaluated from
/// `k² cosh β (cosh β + cos θ sinh β) / (3 cosh β + cos θ sinh β)²`,
/// divided through by `cosh² β` once `β > 20`.
pub fn nash_one_param(k: GameParams, beta: f64, theta: f64) -> Result<NashResult> {
    let p = EntanglerParams::one_param(beta, theta)?;
    let mut result = nash_two_param(k, p);
    let (c, k2) = (theta.cos(), k.k() * k.k());
    result.payoff = if beta <= 20.0 {
        let (ch, sh) = (beta.cosh(), beta.sinh());
        k2 * ch * (ch + c * sh) / (3.0 * ch + c * sh).powi(2)
    } else {
        let t = beta.tanh();
        k2 * (1.0 + c * t) / (3.0 + c * t).powi(2)
    };
    Ok(result)
}

/// `β → ∞` limit of the one-parameter Nash payoff, `k²(1 + cos θ)/(3 + cos θ)²`.
pub fn payoff_limit_beta_inf(theta: f64, k: GameParams) -> f64 {
    let c = theta.cos();
    k.k() * k.k() * (1.0 + c) / (3.0 + c).powi(2)
}

/// The supremum `k²/8` of every equilibrium payoff.
pub fn payoff_bound(k: GameParams) -> f64 {
    k.k() * k.k() / 8.0
}
