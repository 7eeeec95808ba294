//! Dense complex matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham, "The Scaling and Squaring Method for the Matrix
//! Exponential Revisited", 2005).
//!
//! Degrees 3, 5, 7 and 9 are used unscaled when the 1-norm is below their
//! backward-error thresholds; otherwise the matrix is scaled by `2^-s` so its
//! norm falls under `θ13` and the degree-13 approximant is squared `s` times.

use nalgebra::DMatrix;
use num_complex::Complex64;

const THETA_LOW: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] =
    [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

type CMat = DMatrix<Complex64>;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Maximum absolute column sum.
pub fn one_norm(a: &CMat) -> f64 {
    a.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential of a square complex matrix.
///
/// # Panics
/// Panics if `a` is not square.
pub fn expm(a: &CMat) -> CMat {
    assert!(a.is_square(), "expm needs a square matrix, got {}x{}", a.nrows(), a.ncols());
    let n = a.nrows();
    if n == 0 {
        return a.clone();
    }

    let norm = one_norm(a);
    for &(degree, theta) in &THETA_LOW {
        if norm <= theta {
            return pade_low(a, degree);
        }
    }

    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil().max(0.0) as i32 } else { 0 };
    let scaled = a * re(2f64.powi(-s));
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

fn pade_low(a: &CMat, degree: usize) -> CMat {
    let b: &[f64] = match degree {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree {degree}"),
    };
    let n = a.nrows();
    let ident = CMat::identity(n, n);
    let a2 = a * a;

    // Even powers I, A², A⁴, ... up to A^(degree-1).
    let mut powers = vec![ident];
    for _ in 1..=(degree / 2) {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }

    let mut u_inner = CMat::zeros(n, n);
    let mut v = CMat::zeros(n, n);
    for (j, p) in powers.iter().enumerate() {
        u_inner += p * re(b[2 * j + 1]);
        v += p * re(b[2 * j]);
    }
    let u = a * u_inner;
    solve_pade(u, v)
}

fn pade13(a: &CMat) -> CMat {
    let b = &B13;
    let n = a.nrows();
    let ident = CMat::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_high = &a6 * (&a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]));
    let u_inner = u_high + &a6 * re(b[7]) + &a4 * re(b[5]) + &a2 * re(b[3]) + &ident * re(b[1]);
    let u = a * u_inner;

    let v_high = &a6 * (&a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]));
    let v = v_high + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + &ident * re(b[0]);
    solve_pade(u, v)
}

fn solve_pade(u: CMat, v: CMat) -> CMat {
    let numerator = &v + &u;
    let denominator = v - u;
    denominator.lu().solve(&numerator).expect("Padé denominator is nonsingular for inputs under the θ bound")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Plain Taylor series with repeated squaring, run long enough to be an
    /// independent reference at modest norms.
    fn taylor_oracle(a: &CMat) -> CMat {
        let n = a.nrows();
        let s = (one_norm(a).max(1.0).log2().ceil() as i32 + 4).max(0);
        let x = a * re(2f64.powi(-s));
        let mut term = CMat::identity(n, n);
        let mut sum = term.clone();
        for k in 1..60 {
            term = &term * &x * re(1.0 / k as f64);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn zero_gives_identity() {
        let z = CMat::zeros(4, 4);
        assert_eq!(expm(&z), CMat::identity(4, 4));
    }

    #[test]
    fn diagonal_input() {
        let (a, b) = (0.7, 2.3);
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![re(-a), re(a), re(-b), re(b)]));
        let e = expm(&d);
        let want = [(-a).exp(), a.exp(), (-b).exp(), b.exp()];
        for i in 0..4 {
            assert!((e[(i, i)] - re(want[i])).norm() < 1e-14 * want[i].max(1.0));
        }
    }

    #[test]
    fn nilpotent_and_rotation() {
        let nil = CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(0.0), re(0.0)]);
        let e = expm(&nil);
        assert!(max_abs_diff(&e, &CMat::from_row_slice(2, 2, &[re(1.0), re(1.0), re(0.0), re(1.0)])) < 1e-15);

        let t = 10.0;
        let rot = CMat::from_row_slice(2, 2, &[re(0.0), re(-t), re(t), re(0.0)]);
        let e = expm(&rot);
        let want = CMat::from_row_slice(2, 2, &[re(t.cos()), re(-t.sin()), re(t.sin()), re(t.cos())]);
        assert!(max_abs_diff(&e, &want) < 1e-13);
    }

    #[test]
    fn every_degree_branch_matches_taylor() {
        let base = CMat::from_fn(4, 4, |i, j| Complex64::new((i as f64 - j as f64) * 0.3, (i * j) as f64 * 0.1 - 0.2));
        let n = one_norm(&base);
        for &target in &[1e-3, 0.1, 0.5, 1.5, 4.0, 30.0] {
            let a = &base * re(target / n);
            let got = expm(&a);
            let want = taylor_oracle(&a);
            let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
            assert!(max_abs_diff(&got, &want) < 1e-12 * scale, "norm {target}");
        }
    }

    proptest! {
        #[test]
        fn exponential_inverse(entries in proptest::collection::vec(-3.0f64..3.0, 32)) {
            let a = CMat::from_fn(4, 4, |i, j| Complex64::new(entries[4 * i + j], entries[16 + 4 * i + j]));
            let prod = expm(&a) * expm(&(-&a));
            let err = (prod - CMat::identity(4, 4)).norm();
            let cond = expm(&a).norm() * expm(&(-&a)).norm();
            prop_assert!(err < 1e-13 * cond.max(1.0), "err {err} cond {cond}");
        }
    }
}
