//! Small dense linear-algebra kernels shared by the system types.
//!
//! The matrix exponential uses scaling-and-squaring with the diagonal
//! Pade(13) approximant (Higham's coefficients); controller-sized matrices
//! stay far below the regime where anything fancier pays off.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pade(13) numerator coefficients b_0..b_13.
const PADE13: [f64; 14] = [
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

/// Threshold on the scaled 1-norm for the Pade(13) approximant.
const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &DMatrix<f64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|x| x.abs()).sum();
        max = max.max(s);
    }
    max
}

/// Matrix exponential exp(A) by scaling-and-squaring with Pade(13).
pub fn matrix_exponential(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix_exponential needs a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if n == 1 {
        return DMatrix::from_element(1, 1, a[(0, 0)].exp());
    }

    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let a_s = a / 2f64.powi(s as i32);

    let eye = DMatrix::<f64>::identity(n, n);
    let a2 = &a_s * &a_s;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let w1 = &a6 * PADE13[13] + &a4 * PADE13[11] + &a2 * PADE13[9];
    let w2 = &a6 * &w1 + &a6 * PADE13[7] + &a4 * PADE13[5] + &a2 * PADE13[3] + &eye * PADE13[1];
    let u = &a_s * w2;
    let z1 = &a6 * PADE13[12] + &a4 * PADE13[10] + &a2 * PADE13[8];
    let v = &a6 * &z1 + &a6 * PADE13[6] + &a4 * PADE13[4] + &a2 * PADE13[2] + &eye * PADE13[0];

    let num = &v + &u;
    let den = &v - &u;
    let mut x = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is singular; input matrix is not finite");
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

/// Eigenvalues of a complex matrix via its Schur form.
pub fn complex_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or(Error::SingularPencil {
            context: "Schur iteration failed to converge",
        })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Full eigendecomposition A = V diag(lambda) V^-1 of a complex matrix.
///
/// Eigenvectors are recovered from the triangular Schur factor by
/// back-substitution; ties between (numerically) equal eigenvalues are
/// broken with a small diagonal guard, and the caller is expected to
/// check the conditioning of `vectors` before trusting the decomposition.
pub fn complex_eigendecomposition(
    a: &DMatrix<Complex64>,
) -> Result<(Vec<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or(Error::SingularPencil {
            context: "Schur iteration failed to converge",
        })?;
    let (q, t) = schur.unpack();
    let t_norm = t.norm().max(f64::MIN_POSITIVE);
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    let mut values = Vec::with_capacity(n);

    for k in 0..n {
        let lambda = t[(k, k)];
        values.push(lambda);
        let mut w = DVector::<Complex64>::zeros(n);
        w[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut rhs = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                rhs -= t[(i, j)] * w[j];
            }
            let mut diag = t[(i, i)] - lambda;
            if diag.norm() < f64::EPSILON * t_norm {
                // Repeated eigenvalue: perturb to keep the solve finite;
                // the conditioning check downstream flags the defect.
                diag = Complex64::new(f64::EPSILON * t_norm, 0.0);
            }
            w[i] = rhs / diag;
        }
        let v = &q * w;
        let norm = v.norm();
        vectors.set_column(k, &(v / Complex64::new(norm, 0.0)));
    }
    Ok((values, vectors))
}

/// 2-norm condition number from the singular values.
pub fn condition_number(a: &DMatrix<Complex64>) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Spectral radius of a real matrix.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.complex_eigenvalues()
        .iter()
        .fold(0.0f64, |m, l| m.max(l.norm()))
}

/// Right null vector of a square complex matrix: the right singular vector
/// belonging to the smallest singular value, together with the ratio
/// sigma_min / sigma_max as a consistency measure.
pub fn smallest_singular_vector(a: &DMatrix<Complex64>) -> (DVector<Complex64>, f64) {
    let svd = nalgebra::SVD::new(a.clone(), false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let k = svd.singular_values.len() - 1;
    let vec = v_t.row(k).adjoint();
    let ratio = if svd.singular_values[0] > 0.0 {
        svd.singular_values[k] / svd.singular_values[0]
    } else {
        0.0
    };
    (vec, ratio)
}

/// Promote a real matrix to complex.
pub fn to_complex(a: &DMatrix<f64>) -> DMatrix<Complex64> {
    a.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exp_of_zero_matrix_is_identity() {
        let z = DMatrix::<f64>::zeros(4, 4);
        let e = matrix_exponential(&z);
        assert!((e - DMatrix::<f64>::identity(4, 4)).norm() < 1e-14);
    }

    #[test]
    fn exp_of_diagonal_is_elementwise() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -2.0, 0.5]));
        let e = matrix_exponential(&a);
        for (i, &d) in [1.0f64, -2.0, 0.5].iter().enumerate() {
            assert!((e[(i, i)] - d.exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn exp_inverse_identity_for_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(1..=6);
            let mut a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            // keep ||A|| <= 5
            let norm = one_norm(&a);
            if norm > 5.0 {
                a /= norm / 5.0;
            }
            let e = matrix_exponential(&a);
            let em = matrix_exponential(&(-&a));
            let err = (&e * &em - DMatrix::<f64>::identity(n, n)).norm();
            assert!(err < 1e-10, "exp(A)exp(-A) != I, err = {err:.3e}");
        }
    }

    #[test]
    fn eigendecomposition_reconstructs_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(2..=6);
            let a = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let (vals, vecs) = complex_eigendecomposition(&a).unwrap();
            let lam = DMatrix::from_diagonal(&DVector::from_vec(vals));
            let rhs = &vecs * &lam;
            let lhs = &a * &vecs;
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn spectral_radius_of_rotation_is_one() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!((spectral_radius(&a) - 1.0).abs() < 1e-12);
    }
}
