use std::f64::consts::TAU;

use clap::Args;
use num_complex::Complex64;
use quantum_cournot::entanglement::entropy_two_param;
use quantum_cournot::equilibrium::{quantities, quantum_payoffs};
use quantum_cournot::fock::{
    appendix_a_fidelity, heisenberg_expectations, heisenberg_prediction, reduced_entropy, simulate_protocol,
    symmetric_reduction_fidelity, FockSpace, OracleConfig,
};
use quantum_cournot::{EntanglerParams, GameParams, QuantumStrategyPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{print_json, CliError};

const MOMENT_TOL: f64 = 1e-6;
const ENTROPY_TOL: f64 = 5e-3;
const FIDELITY_TOL: f64 = 1e-8;
const ENVELOPE_SQUEEZE: f64 = 0.5;

#[derive(Args)]
pub struct VerifyArgs {
    /// Fock levels kept per mode.
    #[arg(long, default_value_t = 60)]
    n_trunc: usize,
    /// Upper bound for the random squeezing magnitudes.
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    max_squeeze: f64,
    #[arg(long, default_value_t = 50)]
    draws: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy)]
enum Check {
    Heisenberg,
    Quantities,
    Payoffs,
    Entropy,
    AppendixA,
    SymmetricReduction,
}

impl Check {
    const ALL: [Check; 6] = [
        Check::Heisenberg,
        Check::Quantities,
        Check::Payoffs,
        Check::Entropy,
        Check::AppendixA,
        Check::SymmetricReduction,
    ];

    fn name(self) -> &'static str {
        match self {
            Check::Heisenberg => "heisenberg_rows",
            Check::Quantities => "quantities",
            Check::Payoffs => "payoffs",
            Check::Entropy => "entropy",
            Check::AppendixA => "appendix_a_fidelity",
            Check::SymmetricReduction => "symmetric_reduction_fidelity",
        }
    }

    /// Fidelity checks report `1 − F`.
    fn tolerance(self) -> f64 {
        match self {
            Check::Heisenberg | Check::Quantities | Check::Payoffs => MOMENT_TOL,
            Check::Entropy => ENTROPY_TOL,
            Check::AppendixA | Check::SymmetricReduction => FIDELITY_TOL,
        }
    }
}

struct Draw {
    p: EntanglerParams,
    x: QuantumStrategyPair,
    probe: [Complex64; 2],
    gammas: [f64; 3],
    reduction: [f64; 2],
}

impl Draw {
    fn new(seed: u64, index: u64, max: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut mag = || rng.random_range(0.0..=max);
        let (alpha, beta) = (mag(), mag());
        let gammas = [mag(), mag(), mag()];
        let reduction = [mag(), mag()];
        let (phi, theta) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        let x = QuantumStrategyPair::new(rng.random_range(0.0..0.6), rng.random_range(0.0..0.6)).expect("in range");
        let probe = [(); 2].map(|_| Complex64::from_polar(rng.random_range(0.0..0.3), rng.random_range(0.0..TAU)));
        let p = EntanglerParams::new(alpha, phi, beta, theta).expect("in range");
        Draw { p, x, probe, gammas, reduction }
    }

    fn error(
        &self,
        check: Check,
        space: &FockSpace,
        k: GameParams,
        cfg: &OracleConfig,
    ) -> quantum_cournot::Result<f64> {
        let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        Ok(match check {
            Check::Heisenberg => {
                let got = heisenberg_expectations(space, self.p, self.probe, cfg)?;
                let want = heisenberg_prediction(self.p, self.probe);
                (got[0] - want[0]).norm().max((got[1] - want[1]).norm())
            }
            Check::Quantities => {
                let out = simulate_protocol(space, k, self.p, self.x, cfg)?;
                let (q1, q2) = quantities(self.p, self.x);
                max_abs(&[out.q1 - q1, out.q2 - q2])
            }
            Check::Payoffs => {
                let out = simulate_protocol(space, k, self.p, self.x, cfg)?;
                let (u1, u2) = quantum_payoffs(k, self.p, self.x);
                max_abs(&[out.u1 - u1, out.u2 - u2])
            }
            Check::Entropy => (reduced_entropy(space, self.p, cfg)? - entropy_two_param(self.p).entropy).abs(),
            Check::AppendixA => {
                let [g1, g2, g12] = self.gammas;
                1.0 - appendix_a_fidelity(space, g1, g2, g12, cfg)?
            }
            Check::SymmetricReduction => {
                let [g1, g12] = self.reduction;
                1.0 - symmetric_reduction_fidelity(space, g1, g12, cfg)?
            }
        })
    }
}

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    max_error: f64,
    tolerance: f64,
    pass: bool,
    /// Draws where the simulation itself failed, e.g. on truncation leak.
    errors: Vec<String>,
}

#[derive(Serialize)]
struct VerifyRecord {
    n_trunc: usize,
    max_squeeze: f64,
    draws: usize,
    seed: u64,
    checks: Vec<CheckReport>,
    pass: bool,
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    if !(args.max_squeeze.is_finite() && args.max_squeeze >= 0.0) {
        return Err(CliError::Usage(format!("--max-squeeze must be nonnegative, got {}", args.max_squeeze)));
    }
    let space = FockSpace::new(args.n_trunc)?;
    if args.max_squeeze > ENVELOPE_SQUEEZE {
        eprintln!(
            "warning: --max-squeeze {} is outside the verified envelope (<= {ENVELOPE_SQUEEZE})",
            args.max_squeeze
        );
    }
    if args.draws == 0 {
        eprintln!("warning: --draws 0 checks nothing");
    }

    let k = GameParams::new(1.0)?;
    let cfg = OracleConfig::default();
    let draws: Vec<Draw> = (0..args.draws as u64).map(|i| Draw::new(args.seed, i, args.max_squeeze)).collect();

    let checks: Vec<CheckReport> = Check::ALL
        .iter()
        .map(|&check| {
            let results: Vec<_> = draws.par_iter().map(|d| d.error(check, &space, k, &cfg)).collect();
            let mut max_error = 0.0f64;
            let mut errors = Vec::new();
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(e) if e.is_nan() || max_error.is_nan() => max_error = f64::NAN,
                    Ok(e) => max_error = max_error.max(e),
                    Err(e) => errors.push(format!("draw {i}: {e}")),
                }
            }
            let tolerance = check.tolerance();
            let pass = errors.is_empty() && max_error < tolerance;
            eprintln!(
                "{:<30} max error {max_error:<12.3e} tol {tolerance:.0e}  {}{}",
                check.name(),
                if pass { "PASS" } else { "FAIL" },
                errors.first().map(|e| format!(" ({} draws failed, first: {e})", errors.len())).unwrap_or_default()
            );
            CheckReport { name: check.name(), max_error, tolerance, pass, errors }
        })
        .collect();

    let pass = checks.iter().all(|c| c.pass);
    print_json(&VerifyRecord {
        n_trunc: args.n_trunc,
        max_squeeze: args.max_squeeze,
        draws: args.draws,
        seed: args.seed,
        checks,
        pass,
    })?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed("oracle checks failed".into()))
    }
}
