use num_complex::Complex64;

/// `sinh(x) / x`, equal to 1 at the origin.
///
/// A short Taylor series is used for `|x| < 1e-4`, where the direct quotient
/// loses digits.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

/// `e^{-shift} (2 cosh x + 2 Re λ · sinh(x)/x)` with `x = |λ|`, the shape
/// shared by both payoff coefficients `z1`, `z2`.
///
/// Evaluated as `e^{x-shift}(1 + ρ) + e^{-x-shift}(1 − ρ)` with `ρ = Re λ / x`.
/// Whichever of `1 ± ρ` is small is rebuilt as `(Im λ)² / (x (x ∓ Re λ))`, so
/// the result keeps full relative precision even when it is of order `e^{-x}`,
/// and large `x` does not overflow once `shift` is taken out.
pub(crate) fn scaled_cosh_sinhc(lambda: Complex64, shift: f64) -> f64 {
    let x = lambda.norm();
    if x < 1e-8 {
        return (2.0 * x.cosh() + 2.0 * lambda.re * sinhc(x)) * (-shift).exp();
    }
    let im2 = lambda.im * lambda.im;
    let one_plus = if lambda.re >= 0.0 { 1.0 + lambda.re / x } else { im2 / (x * (x - lambda.re)) };
    let one_minus = if lambda.re <= 0.0 { 1.0 - lambda.re / x } else { im2 / (x * (x + lambda.re)) };
    (x - shift).exp() * one_plus + (-x - shift).exp() * one_minus
}
