//! Covariance matrices of the entangled initial states and their entanglement
//! entropy.
//!
//! Quadratures are `X = (a + a†)/√2`, `P = i(a† − a)/√2`, so `[X, P] = i`
//! and the vacuum covariance is `I/2`. For a pure two-mode Gaussian state the
//! entropy of either mode is a function of that mode's single symplectic
//! eigenvalue `μ ≥ 1/2`:
//!
//! ```text
//! S(μ) = (μ + ½) log₂(μ + ½) − (μ − ½) log₂(μ − ½)
//! ```

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::entangler::{expm_closed_form, EntanglerParams};
use crate::error::{Error, Result};
use crate::special::sinhc;

/// `Ω = ⊕ [[0, 1], [−1, 0]]` over `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    omega: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Self {
        let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            omega[(2 * k, 2 * k + 1)] = 1.0;
            omega[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { omega }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.omega
    }
}

/// Real symmetric positive-definite quadrature covariance, ordered
/// `(X₁, P₁, X₂, P₂, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    sigma: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(sigma: DMatrix<f64>) -> Result<Self> {
        validate(&sigma)?;
        Ok(Self { sigma })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn modes(&self) -> usize {
        self.sigma.nrows() / 2
    }

    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        k_matrix_spectrum(&self.sigma)
    }

    /// True when every symplectic eigenvalue respects `μ ≥ 1/2`.
    pub fn is_physical(&self) -> bool {
        self.symplectic_eigenvalues().iter().all(|&mu| mu >= 0.5 - 1e-12)
    }

    /// Covariance of mode `k` alone (a 2×2 diagonal block).
    pub fn mode_block(&self, k: usize) -> CovarianceMatrix {
        CovarianceMatrix { sigma: self.sigma.view((2 * k, 2 * k), (2, 2)).into_owned() }
    }

    /// `√det σ`, the symplectic eigenvalue of a single-mode block.
    pub fn single_mode_mu(&self) -> Option<f64> {
        (self.sigma.nrows() == 2).then(|| self.sigma.determinant().max(0.0).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyResult {
    pub mu: f64,
    /// Entanglement entropy in bits.
    pub entropy: f64,
}

fn validate(sigma: &DMatrix<f64>) -> Result<()> {
    let (rows, cols) = sigma.shape();
    if rows != cols || rows == 0 || rows % 2 != 0 {
        return Err(Error::BadShape { rows, cols });
    }
    let scale = sigma.amax().max(1.0);
    let asym = (sigma - sigma.transpose()).amax();
    if asym.is_nan() || asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    if sigma.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

fn k_matrix_spectrum(sigma: &DMatrix<f64>) -> Vec<f64> {
    let omega = SymplecticForm::new(sigma.nrows() / 2);
    let k = sigma * omega.matrix();
    let mut mus: Vec<f64> = k.complex_eigenvalues().iter().filter(|z| z.im > 0.0).map(|z| z.im).collect();
    mus.sort_by(|a, b| b.total_cmp(a));
    mus
}

/// Symplectic eigenvalues of `σ`: the positive imaginary parts of the
/// eigenvalues of `K = σΩ`, which come in pairs `±iμ`. Sorted descending.
pub fn symplectic_eigenvalues(sigma: &DMatrix<f64>) -> Result<Vec<f64>> {
    validate(sigma)?;
    Ok(k_matrix_spectrum(sigma))
}

/// One-mode covariance of the one-parameter state `J(ξ)|00⟩`:
/// `diag(cosh 2β, cosh 2β)/2`, independent of the phase.
pub fn covariance_one_param(beta: f64) -> CovarianceMatrix {
    let c = 0.5 * (2.0 * beta).cosh();
    CovarianceMatrix { sigma: DMatrix::from_row_slice(2, 2, &[c, 0.0, 0.0, c]) }
}

/// One-mode covariance of the two-parameter state `J₁(δ, ξ)|00⟩`.
///
/// With `λ∓ = 2δ ∓ ξ` (so `a = |λ₋|`, `b = |λ₊|`):
///
/// ```text
/// σ₁₁ = (cosh 2a + cosh 2b)/4 − [Re λ₋ sinhc 2a + Re λ₊ sinhc 2b]/2
/// σ₂₂ = (cosh 2a + cosh 2b)/4 + [Re λ₋ sinhc 2a + Re λ₊ sinhc 2b]/2
/// σ₁₂ = −[Im λ₋ sinhc 2a + Im λ₊ sinhc 2b]/2
/// ```
///
/// where `(1/(ad) + ad) sinh 2a = 4 Re λ₋ sinhc 2a` and the off-diagonal is the
/// real part of `(i/8)[(ad − 1/(ad)) sinh 2a + (bf − 1/(bf)) sinh 2b]`.
pub fn covariance_two_param(p: EntanglerParams) -> CovarianceMatrix {
    let (a, b) = (p.rate_a(), p.rate_b());
    let (lm, lp) = (p.lambda_minus(), p.lambda_plus());
    let (sa, sb) = (sinhc(2.0 * a), sinhc(2.0 * b));
    let diag = 0.25 * ((2.0 * a).cosh() + (2.0 * b).cosh());
    let re = 0.5 * (lm.re * sa + lp.re * sb);
    let off = -0.5 * (lm.im * sa + lp.im * sb);
    CovarianceMatrix { sigma: DMatrix::from_row_slice(2, 2, &[diag - re, off, off, diag + re]) }
}

/// Full two-mode covariance of `J₁|00⟩`, built from the Bogoliubov
/// transform `J₁† v J₁ = e^{−M} v` acting on vacuum second moments.
///
/// This does not share any algebra with [`covariance_two_param`]; its top-left
/// block must reproduce it.
pub fn covariance_full(p: EntanglerParams) -> CovarianceMatrix {
    let reversed =
        EntanglerParams::new(p.alpha(), p.phi() + std::f64::consts::PI, p.beta(), p.theta() + std::f64::consts::PI)
            .expect("shifted phases of valid params are valid");
    let t = expm_closed_form(reversed).expm;

    // Vacuum moments ⟨v_k v_l⟩: only ⟨a_i a_i†⟩ = 1.
    let mut g = Matrix4::<Complex64>::zeros();
    g[(0, 2)] = Complex64::new(1.0, 0.0);
    g[(1, 3)] = Complex64::new(1.0, 0.0);
    let moments = t * g * t.transpose();

    // Quadratures from ladder operators.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (r, i) = (Complex64::new(h, 0.0), Complex64::new(0.0, h));
    let z = Complex64::new(0.0, 0.0);
    let w = Matrix4::new(r, z, r, z, -i, z, i, z, z, r, z, r, z, -i, z, i);
    let second = w * moments * w.transpose();
    let sigma = DMatrix::from_fn(4, 4, |k, l| 0.5 * (second[(k, l)] + second[(l, k)]).re);
    CovarianceMatrix { sigma }
}

/// Closed-form symplectic eigenvalue of either mode of `J₁|00⟩`:
///
/// ```text
/// μ̃ = ¼ √(2 + 2 cosh 2a cosh 2b − (ad/bf + bf/ad) sinh 2a sinh 2b)
/// ```
///
/// With `w = λ₋ λ̄₊` one has `ad/bf + bf/ad = 2 Re w / (ab)` and
/// `Re w = 4α² − β²`. Splitting `2 cosh 2a cosh 2b` as
/// `2 cosh 2(a − b) + 2 sinh 2a sinh 2b` turns this into a sum of
/// nonnegative terms,
///
/// ```text
/// μ̃ = ½ √(cosh²(a − b) + 2 (|w| − Re w) sinhc(2a) sinhc(2b))
/// ```
///
/// which avoids the `e^{2(a+b)}` cancellation of the printed form and is
/// regular where `ab` vanishes. Depends on the phases only through `θ − φ`,
/// with period `π`.
pub fn mu_two_param(p: EntanglerParams) -> f64 {
    let (a, b) = (p.rate_a(), p.rate_b());
    let (alpha, beta) = (p.alpha(), p.beta());
    let re_w = 4.0 * alpha * alpha - beta * beta;
    let im_w = 4.0 * alpha * beta * (p.phi() - p.theta()).sin();
    let abs_w = a * b;
    let gap = if re_w > 0.0 { im_w * im_w / (abs_w + re_w) } else { abs_w - re_w };
    let c = (a - b).cosh();
    0.5 * (c * c + 2.0 * gap * sinhc(2.0 * a) * sinhc(2.0 * b)).sqrt()
}

/// Entanglement entropy in bits for symplectic eigenvalue `mu`.
pub fn entropy_from_mu(mu: f64) -> Result<f64> {
    if mu.is_nan() || mu < 0.5 - 1e-9 {
        return Err(Error::BelowUncertainty(mu));
    }
    let minus = (mu - 0.5).max(0.0);
    // (μ+½)log(μ+½) − (μ−½)log(μ−½) = log(μ+½) + (μ−½)log(1 + 1/(μ−½)).
    let tail = if minus < 1e-15 { 0.0 } else { minus * (1.0 / minus).ln_1p() };
    Ok(((minus + 1.0).ln() + tail) / std::f64::consts::LN_2)
}

/// `S₁ = [cosh 2β ln coth β + ln(cosh β sinh β)] / ln 2` for the one-parameter
/// state, zero at `β = 0`.
pub fn entropy_one_param(beta: f64) -> f64 {
    if beta <= 0.0 {
        return 0.0;
    }
    // ln coth β = 2 atanh(e^{-2β}) keeps the first term alive at large β.
    let ln_coth = 2.0 * (-2.0 * beta).exp().atanh();
    let ln_cosh_sinh = if beta < 10.0 {
        (beta.cosh() * beta.sinh()).ln()
    } else {
        2.0 * beta - 4f64.ln() + (-(-4.0 * beta).exp()).ln_1p()
    };
    let first = if beta < 300.0 { (2.0 * beta).cosh() * ln_coth } else { 1.0 };
    (first + ln_cosh_sinh) / std::f64::consts::LN_2
}

/// `S̃₁` of the two-parameter state, with its symplectic eigenvalue.
pub fn entropy_two_param(p: EntanglerParams) -> EntropyResult {
    let mu = mu_two_param(p);
    let entropy = entropy_from_mu(mu).expect("closed-form mu is clamped to >= 1/2");
    EntropyResult { mu, entropy }
}
