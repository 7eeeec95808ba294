use clap::Args;
use quantum_cournot::entanglement::entropy_two_param;
use quantum_cournot::golden::{golden, TableCell};
use quantum_cournot::optimizer::{find_extremum, payoff_difference, ExtremumReport};
use quantum_cournot::{EntanglerParams, GameParams};
use serde::Serialize;

use crate::{print_json, CliError};

#[derive(Args)]
pub struct Table1Args {
    /// Columns `α = β` to recompute, from 0.2, 0.5, 1, 5. All by default.
    #[arg(long, value_delimiter = ',')]
    cells: Vec<f64>,
}

#[derive(Serialize)]
struct CellResult {
    #[serde(flatten)]
    found: ExtremumReport,
    reference: TableCell,
    /// `Δu` at the reference phases.
    value_at_reference: f64,
    /// `S̃₁` at the reference phases.
    entropy_two_at_reference: f64,
    pass: bool,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct Table1Record {
    value_tolerance: f64,
    entropy_tolerance: f64,
    cells: Vec<CellResult>,
    pass: bool,
}

pub fn run(args: Table1Args) -> Result<(), CliError> {
    let data = golden();
    let columns = data.columns();
    let wanted = if args.cells.is_empty() { columns.clone() } else { args.cells };
    for &c in &wanted {
        if !columns.iter().any(|&x| (x - c).abs() < 1e-12) {
            return Err(CliError::Usage(format!("no table column for alpha = beta = {c}; choose from {columns:?}")));
        }
    }

    let tol = data.tolerances;
    let k = GameParams::new(1.0)?;
    let mut cells = Vec::new();
    for reference in data.table1.iter().filter(|r| wanted.iter().any(|&c| (c - r.alpha_beta).abs() < 1e-12)) {
        let found = find_extremum(k, reference.alpha_beta, reference.mode)?;
        let ab = reference.alpha_beta;
        let value_at_reference = payoff_difference(k, ab, reference.theta, reference.phi)?;
        let entropy_two_at_reference =
            entropy_two_param(EntanglerParams::new(ab, reference.phi, ab, reference.theta)?).entropy;

        let mut failures = Vec::new();
        let mut compare = |what: &str, got: f64, want: f64, tol: f64| {
            let err = (got - want).abs();
            if err.is_nan() || err > tol {
                failures.push(format!("{what} {got:.4} vs {want:.4}"));
            }
        };
        compare("value", found.value, reference.value, tol.value);
        compare("S1", found.entropy_one, reference.entropy_one, tol.entropy);
        compare("S~1 at reference phases", entropy_two_at_reference, reference.entropy_two, tol.entropy);
        cells.push(CellResult {
            found,
            reference: *reference,
            value_at_reference,
            entropy_two_at_reference,
            pass: failures.is_empty(),
            failures,
        });
    }

    eprintln!(
        "{:>5} {:>4} {:>9} {:>7} {:>7} {:>9} {:>9} {:>9} {:>9} {:>9}  status",
        "a=b", "mode", "du", "theta", "phi", "S~1", "S1", "ref du", "ref S~1", "ref S1"
    );
    for c in &cells {
        let f = &c.found;
        eprintln!(
            "{:>5} {:>4} {:>9.4} {:>7.4} {:>7.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}  {}",
            f.alpha_beta,
            f.mode,
            f.value,
            f.theta,
            f.phi,
            f.entropy_two,
            f.entropy_one,
            c.reference.value,
            c.reference.entropy_two,
            c.reference.entropy_one,
            if c.pass { "ok".to_string() } else { format!("FAIL ({})", c.failures.join("; ")) }
        );
    }

    let pass = cells.iter().all(|c| c.pass);
    print_json(&Table1Record { value_tolerance: tol.value, entropy_tolerance: tol.entropy, cells, pass })?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed("some cells are outside tolerance".into()))
    }
}
