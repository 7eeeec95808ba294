//! The generalized entangling operator
//! `J₁ = exp(δ*(a₁² + a₂²) − δ(a₁†² + a₂†²) + ξ* a₁a₂ − ξ a₁†a₂†)` with
//! `δ = α e^{iφ}` and `ξ = β e^{iθ}`, and its Heisenberg-picture action on the
//! mode vector `(a₁, a₂, a₁†, a₂†)`.
//!
//! Conjugation by `J₁` acts linearly through `e^M`, where `M` is the
//! block-antidiagonal generator built by [`build_generator`]. On the symmetric
//! and antisymmetric mode combinations the upper-right block of `M` has the
//! eigenvalues `2δ ± ξ`, whose moduli are the rates
//! `b = |2δ + ξ|` and `a = |2δ − ξ|`:
//!
//! ```text
//! a = √(4α² + β² − 4αβ cos(θ−φ))      b = √(4α² + β² + 4αβ cos(θ−φ))
//! ```
//!
//! The unit phases `ad = (2δ − ξ)/a` and `bf = (2δ + ξ)/b` are undefined when
//! `a` or `b` vanishes. Every downstream formula only needs `ad·sinh a` and
//! `bf·sinh b`, which we evaluate as `(2δ ∓ ξ)·sinh(x)/x` and which stay smooth
//! through those points.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{nonnegative, Error, Result};
use crate::expm::expm;
use crate::special::sinhc;

/// Squeezing magnitudes and phases of the entangler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglerParams {
    alpha: f64,
    phi: f64,
    beta: f64,
    theta: f64,
}

fn reduce_phase(name: &'static str, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidPhase { name, value: x });
    }
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    Ok(if r >= TAU { 0.0 } else { r })
}

impl EntanglerParams {
    /// Phases are reduced into `[0, 2π)`.
    pub fn new(alpha: f64, phi: f64, beta: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            alpha: nonnegative("alpha", alpha)?,
            phi: reduce_phase("phi", phi)?,
            beta: nonnegative("beta", beta)?,
            theta: reduce_phase("theta", theta)?,
        })
    }

    /// The one-parameter entangler `exp(−ξ a₁†a₂† + ξ* a₁a₂)`.
    pub fn one_param(beta: f64, theta: f64) -> Result<Self> {
        Self::new(0.0, 0.0, beta, theta)
    }

    pub fn identity() -> Self {
        Self { alpha: 0.0, phi: 0.0, beta: 0.0, theta: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn phi(&self) -> f64 {
        self.phi
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Single-mode squeezing `δ = α e^{iφ}`.
    pub fn delta(&self) -> Complex64 {
        Complex64::from_polar(self.alpha, self.phi)
    }

    /// Two-mode squeezing `ξ = β e^{iθ}`.
    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar(self.beta, self.theta)
    }

    /// `2δ − ξ`, the antisymmetric-channel coupling; its modulus is `a`.
    pub fn lambda_minus(&self) -> Complex64 {
        2.0 * self.delta() - self.xi()
    }

    /// `2δ + ξ`, the symmetric-channel coupling; its modulus is `b`.
    pub fn lambda_plus(&self) -> Complex64 {
        2.0 * self.delta() + self.xi()
    }

    /// The antisymmetric rate `a`.
    pub fn rate_a(&self) -> f64 {
        self.lambda_minus().norm()
    }

    /// The symmetric rate `b`.
    pub fn rate_b(&self) -> f64 {
        self.lambda_plus().norm()
    }
}

/// Intermediate quantities of the closed-form Heisenberg transform.
///
/// `d`, `f`, `ad` and `bf` are `None` exactly when their denominator
/// `2αe^{iθ} ∓ βe^{iφ}` vanishes (equivalently `a = 0` or `b = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedCoefficients {
    pub a: f64,
    pub b: f64,
    pub d: Option<Complex64>,
    pub f: Option<Complex64>,
    pub ad: Option<Complex64>,
    pub bf: Option<Complex64>,
    /// `2 cosh b + (1/(bf) + bf) sinh b`.
    pub z1: f64,
    /// `2 cosh a + (1/(ad) + ad) sinh a`.
    pub z2: f64,
}

pub fn derive_coefficients(p: EntanglerParams) -> DerivedCoefficients {
    let (alpha, beta) = (p.alpha, p.beta);
    let common = Complex64::from_polar(1.0, p.theta + p.phi);
    let den_d = 2.0 * alpha * Complex64::from_polar(1.0, p.theta) - beta * Complex64::from_polar(1.0, p.phi);
    let den_f = 2.0 * alpha * Complex64::from_polar(1.0, p.theta) + beta * Complex64::from_polar(1.0, p.phi);
    let a = p.rate_a();
    let b = p.rate_b();

    // Phase reduction leaves rounding residue where a denominator should vanish.
    let tiny = 1e-14 * (2.0 * alpha + beta);
    let d = (den_d.norm() > tiny).then(|| common / den_d);
    let f = (den_f.norm() > tiny).then(|| common / den_f);
    let ad = d.map(|d| a * d);
    let bf = f.map(|f| b * f);

    let (rz1, rz2) = real_form_coefficients(p);
    let z1 = match bf {
        Some(bf) => (2.0 * b.cosh() + (bf.inv() + bf) * b.sinh()).re,
        None => rz1,
    };
    let z2 = match ad {
        Some(ad) => (2.0 * a.cosh() + (ad.inv() + ad) * a.sinh()).re,
        None => rz2,
    };
    DerivedCoefficients { a, b, d, f, ad, bf, z1, z2 }
}

/// `z1`, `z2` written with real trigonometric factors only:
///
/// ```text
/// z1 = 2[cosh b + (β cos θ + 2α cos φ)·sinh(b)/b]
/// z2 = 2[cosh a + (2α cos φ − β cos θ)·sinh(a)/a]
/// ```
pub fn real_form_coefficients(p: EntanglerParams) -> (f64, f64) {
    let a =
        (4.0 * p.alpha * p.alpha + p.beta * p.beta - 4.0 * p.alpha * p.beta * (p.theta - p.phi).cos()).max(0.0).sqrt();
    let b =
        (4.0 * p.alpha * p.alpha + p.beta * p.beta + 4.0 * p.alpha * p.beta * (p.theta - p.phi).cos()).max(0.0).sqrt();
    let plus = p.beta * p.theta.cos() + 2.0 * p.alpha * p.phi.cos();
    let minus = 2.0 * p.alpha * p.phi.cos() - p.beta * p.theta.cos();
    (2.0 * (b.cosh() + plus * sinhc(b)), 2.0 * (a.cosh() + minus * sinhc(a)))
}

/// Generator `M` of the Heisenberg flow in the basis `(a₁, a₂, a₁†, a₂†)`.
pub fn build_generator(p: EntanglerParams) -> Matrix4<Complex64> {
    let two_delta = 2.0 * p.delta();
    let xi = p.xi();
    let z = Complex64::new(0.0, 0.0);
    Matrix4::new(
        z,
        z,
        two_delta,
        xi,
        z,
        z,
        xi,
        two_delta,
        two_delta.conj(),
        xi.conj(),
        z,
        z,
        xi.conj(),
        two_delta.conj(),
        z,
        z,
    )
}

/// `M` together with `e^M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergTransform {
    pub m: Matrix4<Complex64>,
    pub expm: Matrix4<Complex64>,
}

impl HeisenbergTransform {
    /// `J₁ a_i J₁†` as coefficients over `(a₁, a₂, a₁†, a₂†)`.
    pub fn conjugated_mode(&self, i: usize) -> [Complex64; 4] {
        let row = self.expm.row(i);
        [row[0], row[1], row[2], row[3]]
    }
}

/// Closed-form `e^M`.
///
/// ```text
///        ⎡ C₊  C₋  S₊  S₋ ⎤     C± = (cosh b ± cosh a)/2
/// e^M =  ⎢ C₋  C₊  S₋  S₊ ⎥     S± = (bf sinh b ± ad sinh a)/2
///        ⎢ S̄₊  S̄₋  C₊  C₋ ⎥
///        ⎣ S̄₋  S̄₊  C₋  C₊ ⎦
/// ```
///
/// `S̄` carries `sinh a/(ad)` and `sinh b/(bf)`, the conjugates of the upper
/// entries since `|ad| = |bf| = 1`.
pub fn expm_closed_form(p: EntanglerParams) -> HeisenbergTransform {
    let a = p.rate_a();
    let b = p.rate_b();
    let ad_sinh_a = p.lambda_minus() * sinhc(a);
    let bf_sinh_b = p.lambda_plus() * sinhc(b);

    let c_plus = Complex64::new(0.5 * (a.cosh() + b.cosh()), 0.0);
    let c_minus = Complex64::new(0.5 * (b.cosh() - a.cosh()), 0.0);
    let s_plus = 0.5 * (ad_sinh_a + bf_sinh_b);
    let s_minus = 0.5 * (bf_sinh_b - ad_sinh_a);
    let (sp, sm) = (s_plus.conj(), s_minus.conj());

    let expm = Matrix4::new(
        c_plus, c_minus, s_plus, s_minus, c_minus, c_plus, s_minus, s_plus, sp, sm, c_plus, c_minus, sm, sp, c_minus,
        c_plus,
    );
    HeisenbergTransform { m: build_generator(p), expm }
}

/// `e^m` by Padé scaling and squaring.
pub fn expm_numeric(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let dyn_m = DMatrix::from_fn(4, 4, |i, j| m[(i, j)]);
    let e = expm(&dyn_m);
    Matrix4::from_fn(|i, j| e[(i, j)])
}
