//! Brute-force oracle on a truncated two-mode Fock space.
//!
//! Basis states `|n₁, n₂⟩` with `0 ≤ nᵢ < N` are stored at index `n₁ N + n₂`.
//! Operators are kept sparse; every generator used here is a quadratic form
//! in ladder operators, so each row has at most a handful of entries.
//!
//! Since `a†` is built as the adjoint of the truncated `a`, every generator
//! is exactly anti-Hermitian and the truncated exponentials are exactly
//! unitary. Truncation damage therefore never shows up as lost norm; instead
//! [`FockState::norm_leak`] records the probability sitting on the top two
//! levels of either mode, where the truncated algebra stops being faithful.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::entangler::{expm_closed_form, EntanglerParams};
use crate::equilibrium::QuantumStrategyPair;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::game::{payoff_from_quantities, GameParams};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Row-compressed sparse complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    dim: usize,
    rows: Vec<Vec<(usize, C)>>,
}

impl SparseOp {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, rows: (0..dim).map(|i| vec![(i, ONE)]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, v: &DVector<C>) -> DVector<C> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        DVector::from_iterator(self.dim, self.rows.iter().map(|row| row.iter().map(|&(j, x)| x * v[j]).sum::<C>()))
    }

    pub fn adjoint(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, x) in row {
                rows[j].push((i, x.conj()));
            }
        }
        rows.iter_mut().for_each(|r| r.sort_by_key(|e| e.0));
        Self { dim: self.dim, rows }
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &SparseOp) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut acc = vec![ZERO; self.dim];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, x) in row {
                    for &(j, y) in &rhs.rows[k] {
                        if acc[j] == ZERO {
                            touched.push(j);
                        }
                        acc[j] += x * y;
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let out: Vec<_> = touched.iter().map(|&j| (j, acc[j])).filter(|e| e.1 != ZERO).collect();
                touched.iter().for_each(|&j| acc[j] = ZERO);
                touched.clear();
                out
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    /// `self + c · rhs`.
    pub fn add_scaled(&self, c: C, rhs: &SparseOp) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(l, r)| {
                let mut merged: Vec<(usize, C)> = l.iter().copied().chain(r.iter().map(|&(j, x)| (j, c * x))).collect();
                merged.sort_by_key(|e| e.0);
                let mut out: Vec<(usize, C)> = Vec::with_capacity(merged.len());
                for (j, x) in merged {
                    match out.last_mut() {
                        Some(last) if last.0 == j => last.1 += x,
                        _ => out.push((j, x)),
                    }
                }
                out.retain(|e| e.1 != ZERO);
                out
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn scale(&self, c: C) -> Self {
        Self { dim: self.dim, rows: self.rows.iter().map(|r| r.iter().map(|&(j, x)| (j, c * x)).collect()).collect() }
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, x) in row {
                m[(i, j)] += x;
            }
        }
        m
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut cols = vec![0.0; self.dim];
        for row in &self.rows {
            for &(j, x) in row {
                cols[j] += x.norm();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

/// Two truncated bosonic modes.
#[derive(Debug, Clone)]
pub struct FockSpace {
    n: usize,
    a1: SparseOp,
    a2: SparseOp,
}

impl FockSpace {
    pub fn new(n_trunc: usize) -> Result<Self> {
        if n_trunc < 2 {
            return Err(Error::TruncationTooSmall(n_trunc));
        }
        let n = n_trunc;
        let dim = n * n;
        let mut a1 = SparseOp::zeros(dim);
        let mut a2 = SparseOp::zeros(dim);
        for m1 in 0..n {
            for m2 in 0..n {
                let row = m1 * n + m2;
                if m1 + 1 < n {
                    a1.rows[row].push(((m1 + 1) * n + m2, C::new(((m1 + 1) as f64).sqrt(), 0.0)));
                }
                if m2 + 1 < n {
                    a2.rows[row].push((m1 * n + m2 + 1, C::new(((m2 + 1) as f64).sqrt(), 0.0)));
                }
            }
        }
        Ok(Self { n, a1, a2 })
    }

    pub fn n_trunc(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.n + n2
    }

    pub fn a1(&self) -> &SparseOp {
        &self.a1
    }

    pub fn a2(&self) -> &SparseOp {
        &self.a2
    }

    pub fn mode(&self, i: usize) -> &SparseOp {
        match i {
            0 => &self.a1,
            1 => &self.a2,
            _ => panic!("mode index {i} out of range"),
        }
    }

    pub fn vacuum(&self) -> FockState {
        let mut psi = DVector::zeros(self.dim());
        psi[0] = ONE;
        FockState { psi, norm_leak: 0.0 }
    }

    /// Product coherent state `|c₁⟩|c₂⟩`, renormalized after truncation.
    pub fn coherent(&self, c1: C, c2: C) -> FockState {
        let single = |c: C| {
            let mut amp = vec![ZERO; self.n];
            amp[0] = ONE;
            for k in 1..self.n {
                amp[k] = amp[k - 1] * c / (k as f64).sqrt();
            }
            amp
        };
        let (u, v) = (single(c1), single(c2));
        let psi = DVector::from_fn(self.dim(), |idx, _| u[idx / self.n] * v[idx % self.n]);
        let mut state = FockState { psi, norm_leak: 0.0 };
        state.renormalize();
        state.norm_leak = self.tail_weight(&state.psi);
        state
    }

    /// Probability on levels `n ≥ N − 2` of either mode.
    pub fn tail_weight(&self, psi: &DVector<C>) -> f64 {
        let edge = self.n.saturating_sub(2);
        let total = psi.norm_squared();
        let tail: f64 = psi
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx / self.n >= edge || idx % self.n >= edge)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        if total > 0.0 {
            tail / total
        } else {
            0.0
        }
    }

    pub fn expectation(&self, op: &SparseOp, state: &FockState) -> C {
        state.psi.dotc(&op.apply(&state.psi))
    }

    /// Quadrature covariance `(X, P)` of mode `i`, with
    /// `X = (a + a†)/√2`, `P = i(a† − a)/√2`.
    pub fn mode_covariance(&self, state: &FockState, i: usize) -> DMatrix<f64> {
        let a = self.mode(i);
        let mean = self.expectation(a, state);
        let sq = self.expectation(&a.compose(a), state);
        let number = self.expectation(&a.adjoint().compose(a), state).re;
        let x = std::f64::consts::SQRT_2 * mean.re;
        let p = std::f64::consts::SQRT_2 * mean.im;
        let xx = sq.re + number + 0.5 - x * x;
        let pp = -sq.re + number + 0.5 - p * p;
        let xp = sq.im - x * p;
        DMatrix::from_row_slice(2, 2, &[xx, xp, xp, pp])
    }
}

/// State vector on a [`FockSpace`] and the largest truncation leak seen while
/// producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub psi: DVector<C>,
    pub norm_leak: f64,
}

impl FockState {
    fn renormalize(&mut self) {
        let norm = self.psi.norm();
        if norm > 0.0 {
            self.psi.unscale_mut(norm);
        }
    }
}

/// How `e^{tG} v` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpMethod {
    /// Dense Padé for spaces up to [`DENSE_LIMIT`] states, Taylor otherwise.
    #[default]
    Auto,
    Dense,
    Taylor,
}

pub const DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub leak_tol: f64,
    pub method: ExpMethod,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { leak_tol: 1e-8, method: ExpMethod::Auto }
    }
}

/// Scaled Taylor action: `s` substeps with `‖hG‖₁ ≤ 4`, each summed until the
/// next term is negligible.
fn taylor_expv(g: &SparseOp, t: f64, v: &DVector<C>) -> DVector<C> {
    let norm = g.one_norm() * t.abs();
    let steps = (norm / 4.0).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut w = v.clone();
    for _ in 0..steps {
        let mut term = w.clone();
        let mut sum = w.clone();
        for k in 1..=80 {
            term = g.apply(&term) * C::new(h / k as f64, 0.0);
            sum += &term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        w = sum;
    }
    w
}

/// `e^{tG}` applied to `state`, with the leak check.
pub fn apply_exp(space: &FockSpace, g: &SparseOp, t: f64, state: &FockState, cfg: &OracleConfig) -> Result<FockState> {
    let dense = match cfg.method {
        ExpMethod::Dense => true,
        ExpMethod::Taylor => false,
        ExpMethod::Auto => g.dim() <= DENSE_LIMIT,
    };
    let psi = if dense { expm(&(g.to_dense() * C::new(t, 0.0))) * &state.psi } else { taylor_expv(g, t, &state.psi) };
    let leak = space.tail_weight(&psi);
    if leak.is_nan() || leak > cfg.leak_tol {
        return Err(Error::TruncationLeak { leak, tolerance: cfg.leak_tol });
    }
    let mut out = FockState { psi, norm_leak: state.norm_leak.max(leak) };
    out.renormalize();
    Ok(out)
}

/// `c (a_i a_j − a_i† a_j†)`.
fn pair_term(space: &FockSpace, i: usize, j: usize) -> SparseOp {
    let (ai, aj) = (space.mode(i), space.mode(j));
    let down = ai.compose(aj);
    down.add_scaled(-ONE, &down.adjoint())
}

/// `Â = δ*(a₁² + a₂²) − δ(a₁†² + a₂†²) + ξ* a₁a₂ − ξ a₁†a₂†`, so that
/// `J₁ = e^Â`.
pub fn entangler_generator(space: &FockSpace, p: EntanglerParams) -> SparseOp {
    let (delta, xi) = (p.delta(), p.xi());
    let (a1, a2) = (space.a1(), space.a2());
    let down = a1.compose(a1).add_scaled(ONE, &a2.compose(a2));
    let cross = a1.compose(a2);
    let positive = down.scale(delta.conj()).add_scaled(xi.conj(), &cross);
    positive.add_scaled(-ONE, &positive.adjoint())
}

/// `J₁|ψ⟩`, or `J₁†|ψ⟩` when `dagger` is set.
pub fn apply_entangler(
    space: &FockSpace,
    p: EntanglerParams,
    dagger: bool,
    state: &FockState,
    cfg: &OracleConfig,
) -> Result<FockState> {
    let g = entangler_generator(space, p);
    apply_exp(space, &g, if dagger { -1.0 } else { 1.0 }, state, cfg)
}

/// `x (a_i† − a_i)`, the generator of `D_i(x)`.
pub fn displacement_generator(space: &FockSpace, i: usize, x: f64) -> SparseOp {
    let a = space.mode(i);
    a.adjoint().add_scaled(-ONE, a).scale(C::new(x, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolOutcome {
    pub q1: f64,
    pub q2: f64,
    pub u1: f64,
    pub u2: f64,
    pub norm_leak: f64,
}

/// `J₁† (D₁(x₁) ⊗ D₂(x₂)) J₁ |00⟩`, measured with `qᵢ = ⟨aᵢ + aᵢ†⟩/2`.
pub fn simulate_protocol(
    space: &FockSpace,
    k: GameParams,
    p: EntanglerParams,
    s: QuantumStrategyPair,
    cfg: &OracleConfig,
) -> Result<ProtocolOutcome> {
    let g = entangler_generator(space, p);
    let mut state = apply_exp(space, &g, 1.0, &space.vacuum(), cfg)?;
    state = apply_exp(space, &displacement_generator(space, 0, s.x1), 1.0, &state, cfg)?;
    state = apply_exp(space, &displacement_generator(space, 1, s.x2), 1.0, &state, cfg)?;
    state = apply_exp(space, &g, -1.0, &state, cfg)?;
    let q1 = space.expectation(space.a1(), &state).re;
    let q2 = space.expectation(space.a2(), &state).re;
    let (u1, u2) = payoff_from_quantities(k.k(), q1, q2);
    Ok(ProtocolOutcome { q1, q2, u1, u2, norm_leak: state.norm_leak })
}

/// Schmidt probabilities of a two-mode pure state, descending.
pub fn schmidt_probabilities(space: &FockSpace, state: &FockState) -> Vec<f64> {
    let n = space.n_trunc();
    let coeffs = DMatrix::from_fn(n, n, |i, j| state.psi[i * n + j]);
    let mut probs: Vec<f64> = coeffs.singular_values().iter().map(|s| s * s).collect();
    probs.sort_by(|a, b| b.total_cmp(a));
    probs
}

/// Von Neumann entropy in bits of either mode of `state`.
pub fn entanglement_entropy(space: &FockSpace, state: &FockState) -> f64 {
    schmidt_probabilities(space, state).into_iter().filter(|&p| p > 1e-300).map(|p| -p * p.log2()).sum()
}

/// Entropy of mode 1 of `J₁|00⟩`.
pub fn reduced_entropy(space: &FockSpace, p: EntanglerParams, cfg: &OracleConfig) -> Result<f64> {
    let state = apply_entangler(space, p, false, &space.vacuum(), cfg)?;
    Ok(entanglement_entropy(space, &state))
}

/// `⟨c|J₁ aᵢ J₁†|c⟩` for the coherent product state `|c₁, c₂⟩`, computed in
/// the Fock space.
pub fn heisenberg_expectations(space: &FockSpace, p: EntanglerParams, c: [C; 2], cfg: &OracleConfig) -> Result<[C; 2]> {
    let probe = space.coherent(c[0], c[1]);
    let moved = apply_entangler(space, p, true, &probe, cfg)?;
    Ok([space.expectation(space.a1(), &moved), space.expectation(space.a2(), &moved)])
}

/// The same expectations predicted by the rows of the closed-form `e^M`:
/// `Σⱼ E_ij cⱼ + E_i,j+2 c̄ⱼ`.
pub fn heisenberg_prediction(p: EntanglerParams, c: [C; 2]) -> [C; 2] {
    let t = expm_closed_form(p);
    let v = [c[0], c[1], c[0].conj(), c[1].conj()];
    [0, 1].map(|i| t.conjugated_mode(i).iter().zip(&v).map(|(e, x)| e * x).sum())
}

/// Coefficients of the single exponential equivalent to the product
/// `e^{γ₁₂(a₁a₂ − h.c.)} e^{γ₁(a₁² − h.c.)/2} e^{γ₂(a₂² − h.c.)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixA {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub r: f64,
}

/// ```text
/// r  = arccosh(cosh((γ₁ − γ₂)/2) cosh γ₁₂)
/// A₁ = (r / sinh r) sinh γ₁₂ e^{−(γ₁−γ₂)/2}
/// A₂ = (r / sinh r) sinh γ₁₂ e^{+(γ₁−γ₂)/2}
/// B₁ = [γ₁ + γ₂ + 2 (r / sinh r) cosh γ₁₂ sinh((γ₁−γ₂)/2)] / 4
/// B₂ = [γ₁ + γ₂ − 2 (r / sinh r) cosh γ₁₂ sinh((γ₁−γ₂)/2)] / 4
/// ```
pub fn appendix_a_coefficients(gamma1: f64, gamma2: f64, gamma12: f64) -> AppendixA {
    let half = 0.5 * (gamma1 - gamma2);
    let r = (half.cosh() * gamma12.cosh()).max(1.0).acosh();
    let q = if r < 1e-8 { 1.0 - r * r / 6.0 } else { r / r.sinh() };
    let a = q * gamma12.sinh();
    let b = 2.0 * q * gamma12.cosh() * half.sinh();
    AppendixA {
        a1: a * (-half).exp(),
        a2: a * half.exp(),
        b1: 0.25 * (gamma1 + gamma2 + b),
        b2: 0.25 * (gamma1 + gamma2 - b),
        r,
    }
}

/// Product form applied to `|00⟩`, rightmost factor first.
pub fn product_form_state(
    space: &FockSpace,
    gamma1: f64,
    gamma2: f64,
    gamma12: f64,
    cfg: &OracleConfig,
) -> Result<FockState> {
    let half = C::new(0.5, 0.0);
    let mut state = space.vacuum();
    state = apply_exp(space, &pair_term(space, 1, 1).scale(half), gamma2, &state, cfg)?;
    state = apply_exp(space, &pair_term(space, 0, 0).scale(half), gamma1, &state, cfg)?;
    apply_exp(space, &pair_term(space, 0, 1), gamma12, &state, cfg)
}

/// `exp[(A₁+A₂)/2 (a₁a₂ − h.c.) + (A₁−A₂)/2 (a₁†a₂ − a₁a₂†) + B₁(a₁² − h.c.) + B₂(a₂² − h.c.)] |00⟩`.
pub fn single_exponential_state(
    space: &FockSpace,
    gamma1: f64,
    gamma2: f64,
    gamma12: f64,
    cfg: &OracleConfig,
) -> Result<FockState> {
    let c = appendix_a_coefficients(gamma1, gamma2, gamma12);
    let (a1, a2) = (space.a1(), space.a2());
    let hop = a1.adjoint().compose(a2);
    let hop = hop.add_scaled(-ONE, &hop.adjoint());
    let g = pair_term(space, 0, 1)
        .scale(C::new(0.5 * (c.a1 + c.a2), 0.0))
        .add_scaled(C::new(0.5 * (c.a1 - c.a2), 0.0), &hop)
        .add_scaled(C::new(c.b1, 0.0), &pair_term(space, 0, 0))
        .add_scaled(C::new(c.b2, 0.0), &pair_term(space, 1, 1));
    apply_exp(space, &g, 1.0, &space.vacuum(), cfg)
}

/// `|⟨ψ|χ⟩|²` for normalized states.
pub fn fidelity(a: &FockState, b: &FockState) -> f64 {
    a.psi.dotc(&b.psi).norm_sqr()
}

pub fn appendix_a_fidelity(
    space: &FockSpace,
    gamma1: f64,
    gamma2: f64,
    gamma12: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    let product = product_form_state(space, gamma1, gamma2, gamma12, cfg)?;
    let single = single_exponential_state(space, gamma1, gamma2, gamma12, cfg)?;
    Ok(fidelity(&product, &single))
}

/// Fidelity between the product form at `γ₁ = γ₂` and `J₁|00⟩` with
/// `δ = γ₁/2`, `ξ = γ₁₂`, `θ = φ = 0`.
pub fn symmetric_reduction_fidelity(space: &FockSpace, gamma1: f64, gamma12: f64, cfg: &OracleConfig) -> Result<f64> {
    let product = product_form_state(space, gamma1, gamma1, gamma12, cfg)?;
    let p = EntanglerParams::new(0.5 * gamma1, 0.0, gamma12, 0.0)?;
    let entangled = apply_entangler(space, p, false, &space.vacuum(), cfg)?;
    Ok(fidelity(&product, &entangled))
}

pub const REDUCTION_N_TRUNC: usize = 40;
pub const FIDELITY_TOL: f64 = 1e-8;

/// Symmetric reduction check at `N = 40`.
pub fn verify_symmetric_reduction(gamma1: f64, gamma12: f64) -> Result<bool> {
    let space = FockSpace::new(REDUCTION_N_TRUNC)?;
    let f = symmetric_reduction_fidelity(&space, gamma1, gamma12, &OracleConfig::default())?;
    Ok(f > 1.0 - FIDELITY_TOL)
}
