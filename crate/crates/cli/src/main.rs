//! `qcournot`: equilibria, entropies, sweeps and reference checks for the
//! quantum Cournot duopoly.
//!
//! Single records go to stdout as one JSON object, sweeps as CSV. Everything
//! meant for a human goes to stderr. Exit status is 0 on success, 1 when a
//! verification fails and 2 on invalid input.

mod table1;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quantum_cournot::entanglement::{entropy_one_param, entropy_two_param};
use quantum_cournot::equilibrium::{nash_one_param, nash_two_param};
use quantum_cournot::sweep::{self, Axis, Quantity, SweepSpec, Tie, Var};
use quantum_cournot::{EntanglerParams, GameParams, NashResult};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "qcournot", version, about = "Quantum Cournot duopoly with a two-parameter entangling operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric Nash equilibrium of the quantum game.
    Payoff(PointArgs),
    /// Entanglement entropy of the initial state, in bits.
    Entropy(PointArgs),
    /// Evaluate quantities on a 1- or 2-D grid and write CSV.
    Sweep(SweepArgs),
    /// Recompute the phase extrema of the payoff gap and compare with the
    /// reference table.
    Table1(table1::Table1Args),
    /// Check the closed forms against a truncated Fock-space simulation.
    Verify(verify::VerifyArgs),
}

#[derive(Args, Clone, Copy)]
struct PointArgs {
    /// Market constant.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    k: f64,
    /// Single-mode squeezing magnitude.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Two-mode squeezing magnitude.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    /// Phase of the two-mode term.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Phase of the single-mode terms.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Use the one-parameter entangler (`alpha` must be 0).
    #[arg(long)]
    one_param: bool,
    /// Read phases in degrees.
    #[arg(long)]
    deg: bool,
}

impl PointArgs {
    fn radians(self) -> Self {
        if self.deg {
            Self { theta: self.theta.to_radians(), phi: self.phi.to_radians(), deg: false, ..self }
        } else {
            self
        }
    }

    fn check_one_param(&self) -> Result<(), CliError> {
        if self.alpha != 0.0 {
            return Err(CliError::Usage("--alpha must be 0 with --one-param".into()));
        }
        Ok(())
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Swept variable as `name:start:stop:steps`; at most two. Phases in
    /// radians unless `--deg`.
    #[arg(long = "axis", required = true, allow_hyphen_values = true)]
    axes: Vec<String>,
    /// Make a variable follow another, e.g. `phi=theta`.
    #[arg(long = "tie")]
    ties: Vec<String>,
    /// One or more of payoff_one, payoff_two, payoff_diff, entropy_one,
    /// entropy_two, mu.
    #[arg(long = "quantity", required = true, value_delimiter = ',')]
    quantities: Vec<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    k: f64,
    /// Fixed values of the variables that are not swept.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Read phases, fixed or swept, in degrees. Output stays in radians.
    #[arg(long)]
    deg: bool,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Failed(String),
    Io(std::io::Error),
}

impl From<quantum_cournot::Error> for CliError {
    fn from(e: quantum_cournot::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Payoff(a) => cmd_payoff(a),
        Command::Entropy(a) => cmd_entropy(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Table1(a) => table1::run(a),
        Command::Verify(a) => verify::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("FAILED: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub(crate) fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct PayoffRecord {
    game: &'static str,
    k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    beta: f64,
    theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    #[serde(flatten)]
    nash: NashResult,
}

fn cmd_payoff(args: PointArgs) -> Result<(), CliError> {
    let a = args.radians();
    let k = GameParams::new(a.k)?;
    let record = if a.one_param {
        a.check_one_param()?;
        PayoffRecord {
            game: "one_param",
            k: a.k,
            alpha: None,
            beta: a.beta,
            theta: a.theta,
            phi: None,
            nash: nash_one_param(k, a.beta, a.theta)?,
        }
    } else {
        let p = EntanglerParams::new(a.alpha, a.phi, a.beta, a.theta)?;
        PayoffRecord {
            game: "two_param",
            k: a.k,
            alpha: Some(a.alpha),
            beta: a.beta,
            theta: a.theta,
            phi: Some(a.phi),
            nash: nash_two_param(k, p),
        }
    };
    if record.nash.negative_quantity {
        eprintln!("warning: the equilibrium quantity is negative");
    }
    print_json(&record)
}

#[derive(Serialize)]
struct EntropyRecord {
    game: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    /// Symplectic eigenvalue of either mode.
    mu: f64,
    /// Von Neumann entropy in bits.
    entropy: f64,
}

fn cmd_entropy(args: PointArgs) -> Result<(), CliError> {
    let a = args.radians();
    let record = if a.one_param {
        a.check_one_param()?;
        // Validates beta; the one-parameter entropy does not depend on θ.
        EntanglerParams::one_param(a.beta, a.theta)?;
        EntropyRecord {
            game: "one_param",
            alpha: None,
            beta: a.beta,
            theta: None,
            phi: None,
            mu: 0.5 * (2.0 * a.beta).cosh(),
            entropy: entropy_one_param(a.beta),
        }
    } else {
        let r = entropy_two_param(EntanglerParams::new(a.alpha, a.phi, a.beta, a.theta)?);
        EntropyRecord {
            game: "two_param",
            alpha: Some(a.alpha),
            beta: a.beta,
            theta: Some(a.theta),
            phi: Some(a.phi),
            mu: r.mu,
            entropy: r.entropy,
        }
    };
    print_json(&record)
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, CliError> {
    let to_rad = |var: Var, x: f64| if args.deg && matches!(var, Var::Theta | Var::Phi) { x.to_radians() } else { x };
    let axes = args
        .axes
        .iter()
        .map(|s| {
            let a: Axis = s.parse()?;
            Ok(Axis { start: to_rad(a.var, a.start), stop: to_rad(a.var, a.stop), ..a })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let ties = args.ties.iter().map(|s| s.parse::<Tie>()).collect::<Result<Vec<_>, _>>()?;
    let quantities = args.quantities.iter().map(|s| s.parse::<Quantity>()).collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec {
        axes,
        fixed: [args.alpha, args.beta, to_rad(Var::Theta, args.theta), to_rad(Var::Phi, args.phi)],
        ties,
        k: args.k,
        quantities,
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let spec = sweep_spec(&args)?;
    let table = sweep::run(&spec)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(std::io::BufWriter::new(std::io::stdout().lock()));
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| sweep::format_number(x)))?;
    }
    w.flush()?;
    eprintln!("{} rows", table.rows.len());
    Ok(())
}
