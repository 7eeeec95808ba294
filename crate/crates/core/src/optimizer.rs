//! Extrema of the payoff gap between the two- and one-parameter games over
//! the phase torus `(θ, φ) ∈ [0, 2π)²`, at fixed `α = β`.
//!
//! A 64×64 grid is scanned in parallel, every local grid extremum is polished
//! with Nelder–Mead, and duplicates that land on the same point of the torus
//! are merged.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{entropy_one_param, entropy_two_param};
use crate::entangler::EntanglerParams;
use crate::equilibrium::{nash_one_param, nash_two_param};
use crate::error::{nonnegative, Error, Result};
use crate::game::GameParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    fn sign(self) -> f64 {
        match self {
            Mode::Max => 1.0,
            Mode::Min => -1.0,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Max => "max",
            Mode::Min => "min",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub alpha_beta: f64,
    pub mode: Mode,
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    /// `S̃₁` at the extremum.
    pub entropy_two: f64,
    /// `S₁`, which depends only on `β`.
    pub entropy_one: f64,
    pub n_evals: usize,
    /// Every distinct basin whose value ties the reported one, as `(θ, φ)`,
    /// including the reported point.
    pub co_optimal: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub grid: usize,
    /// Stop once the simplex diameter drops below this.
    pub xtol: f64,
    pub max_iter: usize,
    /// Refine at most this many grid extrema, best first.
    pub max_starts: usize,
    /// Values within this of the best count as ties.
    pub tie_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { grid: 64, xtol: 1e-6, max_iter: 2000, max_starts: 24, tie_tol: 1e-10 }
    }
}

/// `Δu(θ, φ) = ũ₁*(α = β, θ, φ) − u₁*(β, θ)`.
pub fn payoff_difference(k: GameParams, alpha_beta: f64, theta: f64, phi: f64) -> Result<f64> {
    let ab = positive(alpha_beta)?;
    let p = EntanglerParams::new(ab, phi, ab, theta)?;
    Ok(nash_two_param(k, p).payoff - nash_one_param(k, ab, theta)?.payoff)
}

fn positive(alpha_beta: f64) -> Result<f64> {
    let v = nonnegative("alpha_beta", alpha_beta)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::NegativeOrNonFinite { name: "alpha_beta", value: v })
    }
}

pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn torus_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = |x: f64, y: f64| {
        let t = (x - y).rem_euclid(TAU);
        t.min(TAU - t)
    };
    d(a.0, b.0).hypot(d(a.1, b.1))
}

pub fn find_extremum(k: GameParams, alpha_beta: f64, mode: Mode) -> Result<ExtremumReport> {
    find_extremum_with(k, alpha_beta, mode, &OptimizerConfig::default())
}

pub fn find_extremum_with(k: GameParams, alpha_beta: f64, mode: Mode, cfg: &OptimizerConfig) -> Result<ExtremumReport> {
    let ab = positive(alpha_beta)?;
    let s = mode.sign();
    // Inputs are validated, so the objective cannot fail below.
    let objective = |theta: f64, phi: f64| s * payoff_difference(k, ab, theta, phi).expect("validated inputs");

    let n = cfg.grid.max(3);
    let h = TAU / n as f64;
    let grid: Vec<f64> =
        (0..n * n).into_par_iter().map(|idx| objective((idx / n) as f64 * h, (idx % n) as f64 * h)).collect();
    let mut n_evals = n * n;

    let at = |i: usize, j: usize| grid[(i % n) * n + (j % n)];
    let mut starts: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let v = at(i, j);
            (0..3).all(|di| (0..3).all(|dj| (di == 1 && dj == 1) || at(i + n - 1 + di, j + n - 1 + dj) <= v))
        })
        .map(|(i, j)| (i, j, at(i, j)))
        .collect();
    starts.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    starts.truncate(cfg.max_starts.max(1));

    let mut candidates: Vec<(f64, f64, f64)> = Vec::new();
    for &(i, j, _) in &starts {
        let start = [i as f64 * h, j as f64 * h];
        let (x, fx, evals) = nelder_mead(|v| -objective(v[0], v[1]), start, 0.5 * h, cfg);
        n_evals += evals;
        let point = (wrap_phase(x[0]), wrap_phase(x[1]));
        let value = -fx;
        match candidates.iter_mut().find(|c| torus_distance((c.0, c.1), point) < 1e-4) {
            Some(c) if value > c.2 => *c = (point.0, point.1, value),
            Some(_) => {}
            None => candidates.push((point.0, point.1, value)),
        }
    }

    let best = candidates.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
    let mut co_optimal: Vec<(f64, f64)> =
        candidates.iter().filter(|c| c.2 >= best - cfg.tie_tol).map(|c| (c.0, c.1)).collect();
    co_optimal.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (theta, phi) = co_optimal[0];

    let value = payoff_difference(k, ab, theta, phi)?;
    n_evals += 1;
    Ok(ExtremumReport {
        alpha_beta: ab,
        mode,
        value,
        theta,
        phi,
        entropy_two: entropy_two_param(EntanglerParams::new(ab, phi, ab, theta)?).entropy,
        entropy_one: entropy_one_param(ab),
        n_evals,
        co_optimal,
    })
}

/// Minimizes `f` over the plane. Returns the best vertex, its value and the
/// number of evaluations.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    step: f64,
    cfg: &OptimizerConfig,
) -> ([f64; 2], f64, usize) {
    let mut simplex = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut values = simplex.map(&f);
    let mut evals = 3;

    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);

    for _ in 0..cfg.max_iter {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let diameter = dist(simplex[0], simplex[1]).max(dist(simplex[0], simplex[2])).max(dist(simplex[1], simplex[2]));
        if diameter < cfg.xtol {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let worst = simplex[2];
        let reflected = lerp(worst, centroid, 2.0);
        let fr = f(reflected);
        evals += 1;

        if fr < values[0] {
            let expanded = lerp(worst, centroid, 3.0);
            let fe = f(expanded);
            evals += 1;
            (simplex[2], values[2]) = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < values[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, f(c))
            } else {
                let c = lerp(centroid, worst, 0.5);
                (c, f(c))
            };
            evals += 1;
            if fc < values[2].min(fr) {
                (simplex[2], values[2]) = (contracted, fc);
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    values[i] = f(simplex[i]);
                }
                evals += 2;
            }
        }
    }

    let best = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[best], values[best], evals)
}
