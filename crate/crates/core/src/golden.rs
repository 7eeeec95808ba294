//! Reference values from the source article, embedded from
//! `data/golden.toml`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::Mode;

const RAW: &str = include_str!("../data/golden.toml");

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct Tolerances {
    pub value: f64,
    pub entropy: f64,
    pub figure: f64,
}

/// One Table 1 cell: an extremum of the payoff difference at `α = β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub alpha_beta: f64,
    pub mode: Mode,
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub entropy_two: f64,
    pub entropy_one: f64,
}

/// Two-parameter equilibrium payoff at `k = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct FigurePoint {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub payoff: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Golden {
    pub version: u32,
    pub tolerances: Tolerances,
    pub table1: Vec<TableCell>,
    pub figure: Vec<FigurePoint>,
}

impl Golden {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Golden(e.to_string()))
    }

    pub fn cell(&self, alpha_beta: f64, mode: Mode) -> Option<&TableCell> {
        self.table1.iter().find(|c| c.mode == mode && (c.alpha_beta - alpha_beta).abs() < 1e-12)
    }

    /// The distinct `α = β` columns of Table 1, in file order.
    pub fn columns(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for c in &self.table1 {
            if !out.contains(&c.alpha_beta) {
                out.push(c.alpha_beta);
            }
        }
        out
    }
}

/// The embedded data set, parsed once.
pub fn golden() -> &'static Golden {
    static CELL: OnceLock<Golden> = OnceLock::new();
    CELL.get_or_init(|| Golden::parse(RAW).expect("embedded golden.toml is valid"))
}
