//! Acceptance criteria 1 to 8. Each test prints one status line and fails if
//! any of its sub-checks fails; failing sub-checks are listed on the line.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::time::{Duration, Instant};

use quantum_cournot::entanglement::{entropy_one_param, entropy_two_param, mu_two_param};
use quantum_cournot::entangler::{derive_coefficients, expm_closed_form, expm_numeric};
use quantum_cournot::equilibrium::{nash_one_param, nash_two_param, quantities, quantum_payoffs};
use quantum_cournot::fock::{
    appendix_a_fidelity, reduced_entropy, simulate_protocol, symmetric_reduction_fidelity, FockSpace, OracleConfig,
};
use quantum_cournot::golden::golden;
use quantum_cournot::optimizer::{find_extremum, payoff_difference};
use quantum_cournot::{classical_nash, EntanglerParams, GameParams, QuantumStrategyPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CLASSICAL_RUNTIME: Duration = Duration::from_millis(1);
const LIMIT_TOL: f64 = 1e-6;
const CLASSICAL_LIMIT_TOL: f64 = 1e-12;
const FIGURE_TOL: f64 = 5e-4;
const FIGURE_RUNTIME: Duration = Duration::from_secs(1);
const TABLE_VALUE_TOL: f64 = 1e-3;
const TABLE_ENTROPY_TOL: f64 = 1e-2;
const TABLE_RUNTIME: Duration = Duration::from_secs(30);
const EXPM_DRAWS: usize = 1000;
const EXPM_MAX_SQUEEZE: f64 = 3.0;
const EXPM_TOL: f64 = 1e-10;
const ORACLE_DRAWS: usize = 50;
const ORACLE_MAX_SQUEEZE: f64 = 0.4;
const ORACLE_N_TRUNC: usize = 60;
const ORACLE_MOMENT_TOL: f64 = 1e-6;
const ORACLE_ENTROPY_TOL: f64 = 5e-3;
const ORACLE_FIDELITY_TOL: f64 = 1e-8;
const ORACLE_RUNTIME: Duration = Duration::from_secs(300);
const BOUND_DRAWS: usize = 10_000;
const BOUND_TOL: f64 = 1e-12;
const UNIT_MODULUS_TOL: f64 = 1e-12;
const STATIONARITY_TOL: f64 = 1e-6;
const ENTROPY_IDENTITY_TOL: f64 = 1e-10;

/// Collects sub-check outcomes for one criterion.
struct Criterion {
    id: u32,
    title: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self { id, title, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {} {status}: {} ({} checks)", self.id, self.title, self.checks);
        if !self.failures.is_empty() {
            line.push_str(&format!("; failed: {}", self.failures.join("; ")));
        }
        println!("{line}");
        assert!(self.failures.is_empty(), "{line}");
    }
}

fn k1() -> GameParams {
    GameParams::new(1.0).unwrap()
}

fn params(alpha: f64, phi: f64, beta: f64, theta: f64) -> EntanglerParams {
    EntanglerParams::new(alpha, phi, beta, theta).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng, max: f64) -> EntanglerParams {
    params(
        rng.random_range(0.0..=max),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..=max),
        rng.random_range(0.0..TAU),
    )
}

#[test]
fn criterion_1_classical_equilibrium() {
    let mut c = Criterion::new(1, "classical equilibrium");
    let start = Instant::now();
    let (s, payoff) = classical_nash(k1());
    let elapsed = start.elapsed();
    c.check(s.q1 == 1.0 / 3.0 && s.q2 == 1.0 / 3.0, || format!("q* = ({}, {})", s.q1, s.q2));
    c.check(payoff == 1.0 / 9.0, || format!("payoff {payoff}"));
    c.check(elapsed < CLASSICAL_RUNTIME, || format!("runtime {elapsed:?}"));
    c.finish();
}

#[test]
fn criterion_2_one_parameter_limits() {
    let mut c = Criterion::new(2, "one-parameter limits");
    let big = nash_one_param(k1(), 30.0, 0.0).unwrap().payoff;
    c.check((big - 0.125).abs() <= LIMIT_TOL, || format!("beta=30 theta=0: {big}"));
    for beta in [0.1, 1.0, 5.0] {
        let u = nash_one_param(k1(), beta, FRAC_PI_2).unwrap().payoff;
        c.check((u - 1.0 / 9.0).abs() <= CLASSICAL_LIMIT_TOL, || format!("beta={beta} theta=pi/2: {u}"));
    }
    c.finish();
}

#[test]
fn criterion_3_figure_datapoints() {
    let mut c = Criterion::new(3, "figure datapoints");
    let g = golden();
    c.check(g.tolerances.figure == FIGURE_TOL, || "golden figure tolerance drifted".into());
    c.check(g.figure.len() == 6, || format!("{} figure points", g.figure.len()));
    let start = Instant::now();
    for pt in &g.figure {
        let u = nash_two_param(k1(), params(pt.alpha, pt.phi, pt.beta, pt.theta)).payoff;
        c.check((u - pt.payoff).abs() <= FIGURE_TOL, || {
            format!(
                "alpha={} beta={} theta={:.4} phi={:.4}: {u:.6} vs {}",
                pt.alpha, pt.beta, pt.theta, pt.phi, pt.payoff
            )
        });
    }
    let elapsed = start.elapsed();
    c.check(elapsed < FIGURE_RUNTIME, || format!("runtime {elapsed:?}"));
    c.finish();
}

#[test]
fn criterion_4_table1_reproduction() {
    let mut c = Criterion::new(4, "Table 1 reproduction");
    let g = golden();
    c.check(g.tolerances.value == TABLE_VALUE_TOL && g.tolerances.entropy == TABLE_ENTROPY_TOL, || {
        "golden table tolerances drifted".into()
    });
    let start = Instant::now();
    let reports: Vec<_> =
        g.table1.par_iter().map(|cell| (cell, find_extremum(k1(), cell.alpha_beta, cell.mode).unwrap())).collect();
    let elapsed = start.elapsed();

    for (cell, report) in reports {
        let tag = format!("{} {}", cell.alpha_beta, cell.mode);
        println!(
            "  cell {tag}: optimizer {:+.6} at ({:.4}, {:.4}), table {:+.4}; S1 {:.4}; S~1 at table phases {:.4} vs {}",
            report.value,
            report.theta,
            report.phi,
            cell.value,
            report.entropy_one,
            entropy_two_param(params(cell.alpha_beta, cell.phi, cell.alpha_beta, cell.theta)).entropy,
            cell.entropy_two,
        );
        c.check((report.value - cell.value).abs() <= TABLE_VALUE_TOL, || {
            format!("{tag} optimizer value {:.6} vs {}", report.value, cell.value)
        });
        c.check((report.entropy_one - cell.entropy_one).abs() <= TABLE_ENTROPY_TOL, || {
            format!("{tag} S1 {:.4} vs {}", report.entropy_one, cell.entropy_one)
        });
        let at_table = params(cell.alpha_beta, cell.phi, cell.alpha_beta, cell.theta);
        let s2 = entropy_two_param(at_table).entropy;
        c.check((s2 - cell.entropy_two).abs() <= TABLE_ENTROPY_TOL, || {
            format!("{tag} S~1 at table phases {s2:.4} vs {}", cell.entropy_two)
        });
        let du = payoff_difference(k1(), cell.alpha_beta, cell.theta, cell.phi).unwrap();
        c.check((du - cell.value).abs() <= TABLE_VALUE_TOL, || {
            format!("{tag} delta u at table phases {du:.6} vs {}", cell.value)
        });
    }
    c.check(elapsed < TABLE_RUNTIME, || format!("runtime {elapsed:?}"));
    c.finish();
}

#[test]
fn criterion_5_closed_form_exponential() {
    let mut c = Criterion::new(5, "closed-form vs numeric exponential");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..EXPM_DRAWS {
        let p = random_params(&mut rng, EXPM_MAX_SQUEEZE);
        let t = expm_closed_form(p);
        let numeric = expm_numeric(&t.m);
        let err = (t.expm - numeric).iter().map(|z| z.norm()).fold(0.0, f64::max);
        worst = worst.max(err);
        c.check(err < EXPM_TOL, || format!("{p:?}: {err:e}"));
    }
    println!("  worst entrywise error {worst:e}");
    c.finish();
}

struct OracleDraw {
    moment_err: f64,
    entropy_err: f64,
    appendix_infidelity: f64,
    reduction_infidelity: f64,
    failure: Option<String>,
}

fn oracle_draw(space: &FockSpace, seed: u64) -> OracleDraw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_params(&mut rng, ORACLE_MAX_SQUEEZE);
    let x = QuantumStrategyPair::new(rng.random_range(0.0..0.6), rng.random_range(0.0..0.6)).unwrap();
    let gammas: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..=ORACLE_MAX_SQUEEZE));
    let (g1, g12) = (rng.random_range(0.0..=ORACLE_MAX_SQUEEZE), rng.random_range(0.0..=ORACLE_MAX_SQUEEZE));
    let cfg = OracleConfig::default();
    let k = k1();

    let run = || -> quantum_cournot::Result<OracleDraw> {
        let out = simulate_protocol(space, k, p, x, &cfg)?;
        let (q1, q2) = quantities(p, x);
        let (u1, u2) = quantum_payoffs(k, p, x);
        let moment_err =
            [out.q1 - q1, out.q2 - q2, out.u1 - u1, out.u2 - u2].iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let entropy_err = (reduced_entropy(space, p, &cfg)? - entropy_two_param(p).entropy).abs();
        let appendix_infidelity = 1.0 - appendix_a_fidelity(space, gammas[0], gammas[1], gammas[2], &cfg)?;
        let reduction_infidelity = 1.0 - symmetric_reduction_fidelity(space, g1, g12, &cfg)?;
        Ok(OracleDraw { moment_err, entropy_err, appendix_infidelity, reduction_infidelity, failure: None })
    };
    run().unwrap_or_else(|e| OracleDraw {
        moment_err: f64::NAN,
        entropy_err: f64::NAN,
        appendix_infidelity: f64::NAN,
        reduction_infidelity: f64::NAN,
        failure: Some(format!("seed {seed}: {e}")),
    })
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut c = Criterion::new(6, "Fock-space oracle equivalence");
    let space = FockSpace::new(ORACLE_N_TRUNC).unwrap();
    let start = Instant::now();
    let draws: Vec<OracleDraw> =
        (0..ORACLE_DRAWS as u64).into_par_iter().map(|i| oracle_draw(&space, 600 + i)).collect();
    let elapsed = start.elapsed();

    let worst = |f: fn(&OracleDraw) -> f64| {
        draws.iter().map(f).fold(0.0f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v) })
    };
    let (moment, entropy) = (worst(|d| d.moment_err), worst(|d| d.entropy_err));
    let (appendix, reduction) = (worst(|d| d.appendix_infidelity), worst(|d| d.reduction_infidelity));
    println!(
        "  worst: moments {moment:e}, entropy {entropy:e}, appendix 1-F {appendix:e}, reduction 1-F {reduction:e}"
    );

    for d in &draws {
        c.check(d.failure.is_none(), || d.failure.clone().unwrap_or_default());
    }
    c.check(moment < ORACLE_MOMENT_TOL, || format!("quantities/payoffs error {moment:e}"));
    c.check(entropy < ORACLE_ENTROPY_TOL, || format!("entropy error {entropy:e}"));
    c.check(appendix < ORACLE_FIDELITY_TOL, || format!("product vs single exponential 1-F {appendix:e}"));
    c.check(reduction < ORACLE_FIDELITY_TOL, || format!("symmetric reduction 1-F {reduction:e}"));
    c.check(elapsed < ORACLE_RUNTIME, || format!("runtime {elapsed:?}"));
    c.finish();
}

#[test]
fn criterion_7_property_suites() {
    let mut c = Criterion::new(7, "property suites");
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for _ in 0..BOUND_DRAWS {
        let k = GameParams::new(rng.random_range(0.1..10.0)).unwrap();
        let p = random_params(&mut rng, 5.0);
        let u = nash_two_param(k, p).payoff;
        let bound = k.k() * k.k() / 8.0;
        c.check(u <= bound + BOUND_TOL, || format!("bound: {p:?} k={}: {u} > {bound}", k.k()));
    }

    for _ in 0..1000 {
        let p = random_params(&mut rng, 3.0);
        let d = derive_coefficients(p);
        for z in [d.ad, d.bf].into_iter().flatten() {
            c.check((z.norm() - 1.0).abs() < UNIT_MODULUS_TOL, || format!("unit modulus: {p:?}: |z| = {}", z.norm()));
        }
    }

    for _ in 0..1000 {
        let k = GameParams::new(rng.random_range(0.1..5.0)).unwrap();
        let p = random_params(&mut rng, 2.0);
        let nash = nash_two_param(k, p);
        let x = nash.x_star;
        let h = 1e-4 * x.max(1e-3);
        let u1 = |x1: f64| quantum_payoffs(k, p, QuantumStrategyPair { x1, x2: x }).0;
        let u2 = |x2: f64| quantum_payoffs(k, p, QuantumStrategyPair { x1: x, x2 }).1;
        let d1 = (u1(x + h) - u1(x - h)) / (2.0 * h);
        let d2 = (u2(x + h) - u2(x - h)) / (2.0 * h);
        let tol = STATIONARITY_TOL * k.k() * k.k();
        c.check(d1.abs() < tol && d2.abs() < tol, || format!("stationarity: {p:?}: ({d1:e}, {d2:e})"));
    }

    for _ in 0..1000 {
        let (alpha, beta, phase) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0), rng.random_range(0.0..TAU));
        let two = entropy_two_param(params(alpha, phase, beta, phase)).entropy;
        let one = entropy_one_param(beta);
        c.check((two - one).abs() < ENTROPY_IDENTITY_TOL, || {
            format!("equal phases: a={alpha} b={beta}: {two} vs {one}")
        });
    }

    for i in 1..=40 {
        let beta = 2.0 * i as f64 / 40.0;
        for j in 0..64 {
            let diff = PI * j as f64 / 64.0;
            for phi in [0.0, 1.3, 4.0] {
                let s2 = entropy_two_param(params(beta, phi, beta, (phi + diff).rem_euclid(TAU))).entropy;
                let s1 = entropy_one_param(beta);
                c.check(s2 >= s1 - 1e-12, || format!("S~1 >= S1: beta={beta} diff={diff}: {s2} < {s1}"));
            }
        }
    }

    for _ in 0..1000 {
        let p = random_params(&mut rng, 4.0);
        let mu = mu_two_param(p);
        c.check(mu >= 0.5 - 1e-12, || format!("mu >= 1/2: {p:?}: {mu}"));

        let base = entropy_two_param(p).entropy;
        let shift = rng.random_range(-10.0..10.0);
        let shifted = entropy_two_param(params(p.alpha(), p.phi() + shift, p.beta(), p.theta() + shift)).entropy;
        let half_turn = entropy_two_param(params(p.alpha(), p.phi(), p.beta(), p.theta() + PI)).entropy;
        let tol = ENTROPY_IDENTITY_TOL * base.max(1.0);
        c.check((base - shifted).abs() < tol, || format!("phase shift: {p:?}: {base} vs {shifted}"));
        c.check((base - half_turn).abs() < tol, || format!("pi-periodicity: {p:?}: {base} vs {half_turn}"));
    }
    c.finish();
}

#[test]
fn criterion_8_monotonicity_and_shape() {
    let mut c = Criterion::new(8, "monotonicity and shape");
    let betas: Vec<f64> = (0..=100).map(|i| 0.05 * i as f64).collect();
    for (theta, increasing) in [(0.0, true), (FRAC_PI_4, true), (3.0 * FRAC_PI_4, false), (PI, false)] {
        let u: Vec<f64> = betas.iter().map(|&b| nash_one_param(k1(), b, theta).unwrap().payoff).collect();
        for (w, b) in u.windows(2).zip(&betas) {
            let ok = if increasing { w[1] > w[0] } else { w[1] < w[0] };
            c.check(ok, || format!("theta={theta:.4} beta={b}: {} then {}", w[0], w[1]));
        }
    }

    for i in 0..=30 {
        let alpha = 0.1 * i as f64;
        for j in 0..=30 {
            let beta = 0.1 * j as f64;
            for t in 0..24 {
                let theta = TAU * t as f64 / 24.0;
                let two = nash_two_param(k1(), params(alpha, theta, beta, theta)).payoff;
                let one = nash_one_param(k1(), beta, theta).unwrap().payoff;
                c.check(two >= one - 1e-12, || format!("case I: a={alpha} b={beta} theta={theta:.4}: {two} < {one}"));
            }
        }
    }
    c.finish();
}
