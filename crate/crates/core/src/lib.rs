//! Quantum Cournot duopoly under a two-parameter, player-symmetric entangling
//! operator.
//!
//! The crate computes classical and quantum Nash equilibria, the entanglement
//! entropy of the initial game state, and the phase extrema of the payoff gap
//! between the one- and two-parameter games. Every closed form is paired with
//! an independent numerical route: a Padé matrix exponential for the
//! Heisenberg transform, a `K = σΩ` eigenvalue route for symplectic
//! eigenvalues, and a truncated two-mode Fock-space simulator ([`fock`]) that
//! replays the whole protocol by brute force.

pub mod entanglement;
pub mod entangler;
pub mod equilibrium;
mod error;
pub mod expm;
pub mod fock;
pub mod game;
pub mod golden;
pub mod optimizer;
mod special;
pub mod sweep;

pub use entanglement::{
    covariance_full, covariance_one_param, covariance_two_param, entropy_from_mu, entropy_one_param, entropy_two_param,
    mu_two_param, symplectic_eigenvalues, CovarianceMatrix, EntropyResult, SymplecticForm,
};
pub use entangler::{
    build_generator, derive_coefficients, expm_closed_form, expm_numeric, real_form_coefficients, DerivedCoefficients,
    EntanglerParams, HeisenbergTransform,
};
pub use equilibrium::{
    nash_one_param, nash_two_param, payoff_limit_beta_inf, quantities, quantum_payoffs, NashResult, QuantumStrategyPair,
};
pub use error::{Error, Result};
pub use game::{classical_nash, classical_payoff, GameParams, PriceRule, StrategyPair};
pub use optimizer::{find_extremum, payoff_difference, ExtremumReport, Mode};
pub use special::sinhc;
