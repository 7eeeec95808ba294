//! Parameter sweeps over one or two of `(α, β, θ, φ)`, producing the tables
//! behind the payoff and entropy surfaces.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{entropy_one_param, entropy_two_param, mu_two_param};
use crate::entangler::EntanglerParams;
use crate::equilibrium::{nash_one_param, nash_two_param};
use crate::error::{Error, Result};
use crate::game::GameParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Alpha,
    Beta,
    Theta,
    Phi,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Alpha, Var::Beta, Var::Theta, Var::Phi];

    pub fn name(self) -> &'static str {
        match self {
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Theta => "theta",
            Var::Phi => "phi",
        }
    }

    fn is_phase(self) -> bool {
        matches!(self, Var::Theta | Var::Phi)
    }

    fn index(self) -> usize {
        self as usize
    }

    fn check(self, value: f64) -> Result<()> {
        let ok = if self.is_phase() { (0.0..=TAU).contains(&value) } else { value.is_finite() && value >= 0.0 };
        if ok {
            Ok(())
        } else {
            let domain = if self.is_phase() { "[0, 2π]" } else { "[0, ∞)" };
            Err(Error::InvalidSweep(format!("{} = {value} is outside {domain}", self.name())))
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Var::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| Error::InvalidSweep(format!("unknown variable '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// One-parameter equilibrium payoff; ignores `α` and `φ`.
    PayoffOne,
    PayoffTwo,
    /// `PayoffTwo − PayoffOne` at the same point.
    PayoffDiff,
    EntropyOne,
    EntropyTwo,
    /// Symplectic eigenvalue of either mode of the two-parameter state.
    Mu,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::PayoffOne,
        Quantity::PayoffTwo,
        Quantity::PayoffDiff,
        Quantity::EntropyOne,
        Quantity::EntropyTwo,
        Quantity::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::PayoffOne => "payoff_one",
            Quantity::PayoffTwo => "payoff_two",
            Quantity::PayoffDiff => "payoff_diff",
            Quantity::EntropyOne => "entropy_one",
            Quantity::EntropyTwo => "entropy_two",
            Quantity::Mu => "mu",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s.trim())
            .ok_or_else(|| Error::InvalidSweep(format!("unknown quantity '{s}'")))
    }
}

/// `steps` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub var: Var,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.stop
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
        }
    }
}

/// Parses `name:start:stop:steps`.
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, steps] = parts[..] else {
            return Err(Error::InvalidSweep(format!("axis '{s}' is not name:start:stop:steps")));
        };
        let num = |t: &str| {
            t.trim().parse::<f64>().map_err(|_| Error::InvalidSweep(format!("'{t}' in axis '{s}' is not a number")))
        };
        Ok(Axis {
            var: var.parse()?,
            start: num(start)?,
            stop: num(stop)?,
            steps: steps
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSweep(format!("'{steps}' in axis '{s}' is not a step count")))?,
        })
    }
}

/// `target` copies the value of `source` at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tie {
    pub target: Var,
    pub source: Var,
}

/// Parses `target=source`, e.g. `phi=theta`.
impl FromStr for Tie {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (target, source) =
            s.split_once('=').ok_or_else(|| Error::InvalidSweep(format!("tie '{s}' is not target=source")))?;
        Ok(Tie { target: target.parse()?, source: source.parse()? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    /// Values of `(α, β, θ, φ)` for variables that are neither swept nor tied.
    pub fixed: [f64; 4],
    pub ties: Vec<Tie>,
    pub k: f64,
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        GameParams::new(self.k).map_err(|e| Error::InvalidSweep(e.to_string()))?;
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidSweep(format!("need one or two axes, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].var == self.axes[1].var {
            return Err(Error::InvalidSweep(format!("axis {} given twice", self.axes[0].var)));
        }
        if self.quantities.is_empty() {
            return Err(Error::InvalidSweep("no quantity requested".into()));
        }
        for axis in &self.axes {
            if axis.steps < 2 {
                return Err(Error::InvalidSweep(format!(
                    "axis {} needs at least 2 steps, got {}",
                    axis.var, axis.steps
                )));
            }
            axis.var.check(axis.start)?;
            axis.var.check(axis.stop)?;
        }
        for tie in &self.ties {
            if tie.target == tie.source {
                return Err(Error::InvalidSweep(format!("{} tied to itself", tie.target)));
            }
            if self.is_axis(tie.target) || self.ties.iter().filter(|t| t.target == tie.target).count() > 1 {
                return Err(Error::InvalidSweep(format!("{} is already determined", tie.target)));
            }
            if self.ties.iter().any(|t| t.target == tie.source) {
                return Err(Error::InvalidSweep(format!("{} is tied to another tied variable", tie.target)));
            }
            if tie.target.is_phase() != tie.source.is_phase() {
                return Err(Error::InvalidSweep(format!("cannot tie {} to {}", tie.target, tie.source)));
            }
        }
        for var in Var::ALL {
            if !self.is_axis(var) && !self.is_tied(var) {
                var.check(self.fixed[var.index()])?;
            }
        }
        Ok(())
    }

    fn is_axis(&self, var: Var) -> bool {
        self.axes.iter().any(|a| a.var == var)
    }

    fn is_tied(&self, var: Var) -> bool {
        self.ties.iter().any(|t| t.target == var)
    }

    pub fn n_rows(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    /// Column names: the axes, the tied variables, then the quantities.
    pub fn header(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.var.name())
            .chain(self.ties.iter().map(|t| t.target.name()))
            .chain(self.quantities.iter().map(|q| q.name()))
            .map(str::to_owned)
            .collect()
    }

    fn point(&self, row: usize) -> [f64; 4] {
        let mut values = self.fixed;
        let mut rest = row;
        for axis in self.axes.iter().rev() {
            values[axis.var.index()] = axis.value(rest % axis.steps);
            rest /= axis.steps;
        }
        for tie in &self.ties {
            values[tie.target.index()] = values[tie.source.index()];
        }
        values
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Evaluates `quantity` at `(α, β, θ, φ)`.
pub fn evaluate(k: GameParams, quantity: Quantity, point: [f64; 4]) -> Result<f64> {
    let [alpha, beta, theta, phi] = point;
    let p = || EntanglerParams::new(alpha, phi, beta, theta);
    Ok(match quantity {
        Quantity::PayoffOne => nash_one_param(k, beta, theta)?.payoff,
        Quantity::PayoffTwo => nash_two_param(k, p()?).payoff,
        Quantity::PayoffDiff => nash_two_param(k, p()?).payoff - nash_one_param(k, beta, theta)?.payoff,
        Quantity::EntropyOne => entropy_one_param(beta),
        Quantity::EntropyTwo => entropy_two_param(p()?).entropy,
        Quantity::Mu => mu_two_param(p()?),
    })
}

/// Runs the sweep. Rows are evaluated in parallel and returned row-major:
/// the first axis is the outer loop.
pub fn run(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let k = GameParams::new(spec.k)?;
    let rows = (0..spec.n_rows())
        .into_par_iter()
        .map(|row| {
            let point = spec.point(row);
            let mut out: Vec<f64> = spec.axes.iter().map(|a| point[a.var.index()]).collect();
            out.extend(spec.ties.iter().map(|t| point[t.target.index()]));
            for &q in &spec.quantities {
                out.push(evaluate(k, q, point)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { header: spec.header(), rows })
}

/// Scientific notation with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}
