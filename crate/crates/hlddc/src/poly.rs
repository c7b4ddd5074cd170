//! Dense polynomial helpers on descending-power coefficient slices.
//!
//! Every routine here follows the same convention as the transfer-function
//! types: `coeffs[0]` multiplies the highest power. These are small-order
//! polynomials (controller orders well below 100), so plain Horner loops and
//! companion-matrix root finding are accurate enough.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

/// Evaluate a real-coefficient polynomial at a complex point by Horner's rule.
pub fn eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        acc = acc * x + c;
    }
    acc
}

/// Evaluate a complex-coefficient polynomial at a complex point.
pub fn eval_complex(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        acc = acc * x + c;
    }
    acc
}

/// Horner evaluation of sum_k |c_k| |x|^(n-k); a magnitude scale used to
/// decide whether an evaluation suffered catastrophic cancellation.
pub fn eval_magnitude(coeffs: &[f64], x: Complex64) -> f64 {
    let r = x.norm();
    let mut acc = 0.0;
    for &c in coeffs {
        acc = acc * r + c.abs();
    }
    acc
}

/// Multiply two polynomials.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Add two polynomials, aligning on the constant term.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().rev().enumerate() {
        out[n - 1 - i] += ai;
    }
    for (i, &bi) in b.iter().rev().enumerate() {
        out[n - 1 - i] += bi;
    }
    out
}

/// Scale a polynomial in place.
pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|c| c * k).collect()
}

/// Drop leading coefficients that are negligible relative to the largest one.
/// A polynomial that is entirely negligible collapses to `[0.0]`.
pub fn strip_leading(coeffs: &[f64], rel_tol: f64) -> Vec<f64> {
    let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if max == 0.0 {
        return vec![0.0];
    }
    let first = coeffs
        .iter()
        .position(|c| c.abs() > rel_tol * max)
        .unwrap_or(coeffs.len() - 1);
    coeffs[first..].to_vec()
}

/// Roots of a real polynomial via the companion-matrix eigenvalues.
/// Leading zeros are stripped first; a constant polynomial has no roots.
pub fn roots(coeffs: &[f64]) -> Vec<Complex64> {
    let stripped = strip_leading(coeffs, 0.0);
    let n = stripped.len().saturating_sub(1);
    if n == 0 {
        return vec![];
    }
    let lead = stripped[0];
    // Companion matrix of the monic polynomial, top-row form.
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -stripped[j + 1] / lead;
    }
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Rebuild a real monic polynomial from a conjugate-closed root set.
/// The imaginary residue of the product is discarded.
pub fn monic_from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        acc = next;
    }
    acc.iter().map(|c| c.re).collect()
}

/// Largest absolute coefficient.
pub fn max_abs(coeffs: &[f64]) -> f64 {
    coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

/// Convert a real slice to complex.
pub fn to_complex(coeffs: &[f64]) -> Vec<Complex64> {
    coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_direct_expansion() {
        // p(x) = 2x^2 - 3x + 1 at x = 2 + i
        let p = [2.0, -3.0, 1.0];
        let x = Complex64::new(2.0, 1.0);
        let direct = 2.0 * x * x - 3.0 * x + 1.0;
        assert!((eval(&p, x) - direct).norm() < 1e-14);
    }

    #[test]
    fn mul_and_add_agree_with_hand_expansion() {
        // (x + 1)(x - 2) = x^2 - x - 2
        let prod = mul(&[1.0, 1.0], &[1.0, -2.0]);
        assert_eq!(prod, vec![1.0, -1.0, -2.0]);
        // (x^2 - x - 2) + (x + 3) = x^2 + 0x + 1
        let sum = add(&prod, &[1.0, 3.0]);
        assert_eq!(sum, vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn roots_of_quadratic() {
        // (s + 1)^2 -> double root at -1
        let r = roots(&[1.0, 2.0, 1.0]);
        assert_eq!(r.len(), 2);
        for root in r {
            assert!((root - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn roots_of_constant_is_empty() {
        assert!(roots(&[5.0]).is_empty());
    }

    #[test]
    fn monic_reconstruction_round_trips() {
        let r = [
            Complex64::new(-1.0, 2.0),
            Complex64::new(-1.0, -2.0),
            Complex64::new(0.5, 0.0),
        ];
        let p = monic_from_roots(&r);
        // (s^2 + 2s + 5)(s - 0.5) = s^3 + 1.5 s^2 + 4 s - 2.5
        let expect = [1.0, 1.5, 4.0, -2.5];
        for (a, b) in p.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn strip_leading_keeps_constant() {
        assert_eq!(strip_leading(&[0.0, 0.0, 3.0], 1e-12), vec![3.0]);
        assert_eq!(strip_leading(&[0.0, 0.0], 1e-12), vec![0.0]);
    }
}
