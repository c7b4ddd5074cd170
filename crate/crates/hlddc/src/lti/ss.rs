//! Descriptor state-space realizations and zero-order-hold discretization.
//!
//! Systems are stored as E x' = A x + B u, y = C x + D u with possibly
//! singular E; a singular E is how a descriptor encodes biproper behaviour,
//! so nothing here assumes E is invertible except the paths that say so.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::tf::RationalTf;
use super::Domain;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly;

/// Scalar field of a realization: real or complex entries. Everything is
/// evaluated in complex arithmetic; this trait only fixes the promotion.
pub trait Scalar: nalgebra::ComplexField<RealField = f64> + Copy {
    fn to_c64(self) -> Complex64;
}

impl Scalar for f64 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn to_c64(self) -> Complex64 {
        self
    }
}

/// SISO descriptor state-space system over real or complex scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorSs<T: Scalar> {
    e: DMatrix<T>,
    a: DMatrix<T>,
    b: DVector<T>,
    c: RowDVector<T>,
    d: T,
    domain: Domain,
}

/// Deterministic shift candidates for the shift-and-invert pole solver;
/// irrational points unlikely to collide with data-driven spectra.
const POLE_SHIFTS: [(f64, f64); 3] = [
    (0.5772156649015329, 1.2020569031595942),
    (-1.3035772690342964, 0.4227843350984671),
    (2.6854520010653064, -0.6434105462883380),
];

impl<T: Scalar> DescriptorSs<T> {
    pub fn new(
        e: DMatrix<T>,
        a: DMatrix<T>,
        b: DVector<T>,
        c: RowDVector<T>,
        d: T,
        domain: Domain,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || e.nrows() != n || e.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "E and A must be square and of equal dimension",
            });
        }
        if b.nrows() != n || c.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "B and C must conform with A",
            });
        }
        Ok(Self {
            e,
            a,
            b,
            c,
            d,
            domain,
        })
    }

    /// Order-0 system: pure feedthrough.
    pub fn from_feedthrough(d: T, domain: Domain) -> Self {
        Self {
            e: DMatrix::identity(0, 0),
            a: DMatrix::zeros(0, 0),
            b: DVector::zeros(0),
            c: RowDVector::zeros(0),
            d,
            domain,
        }
    }

    pub fn e(&self) -> &DMatrix<T> {
        &self.e
    }

    pub fn a(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &DVector<T> {
        &self.b
    }

    pub fn c(&self) -> &RowDVector<T> {
        &self.c
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// State dimension.
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    fn e_is_identity(&self) -> bool {
        let n = self.e.nrows();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let want = if i == j { 1.0 } else { 0.0 };
                (self.e[(i, j)].to_c64() - want).norm() == 0.0
            })
        })
    }

    fn promoted(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let e = self.e.map(|x| x.to_c64());
        let a = self.a.map(|x| x.to_c64());
        (e, a)
    }

    /// Evaluate H(sigma) = C (sigma E - A)^{-1} B + D.
    pub fn eval(&self, point: Complex64) -> Result<Complex64> {
        let n = self.order();
        if n == 0 {
            return Ok(self.d.to_c64());
        }
        let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
            point * self.e[(i, j)].to_c64() - self.a[(i, j)].to_c64()
        });
        let rhs = DVector::<Complex64>::from_fn(n, |i, _| self.b[i].to_c64());
        let x = m.lu().solve(&rhs).ok_or(Error::PoleHit { point })?;
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::PoleHit { point });
        }
        let mut acc = self.d.to_c64();
        for i in 0..n {
            acc += self.c[i].to_c64() * x[i];
        }
        Ok(acc)
    }

    /// Frequency response at omega rad/s (j*omega or e^{j omega T}).
    pub fn frequency_response(&self, omega: f64) -> Result<Complex64> {
        let point = match self.domain {
            Domain::ContinuousS => Complex64::new(0.0, omega),
            Domain::DiscreteZ { period } => Complex64::from_polar(1.0, omega * period),
        };
        self.eval(point)
    }

    /// Finite generalized eigenvalues of (A, E). Infinite eigenvalues from
    /// singular E directions are excluded.
    ///
    /// Standard-form systems reduce to a plain eigenvalue problem; genuine
    /// descriptors go through shift-and-invert: the eigenvalues theta of
    /// W = (A - s0 E)^{-1} E map to poles via lambda = s0 + 1/theta, and
    /// theta ~ 0 marks an infinite eigenvalue.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let n = self.order();
        if n == 0 {
            return Ok(vec![]);
        }
        let (e_c, a_c) = self.promoted();
        if self.e_is_identity() {
            return linalg::complex_eigenvalues(&a_c);
        }
        for &(re, im) in &POLE_SHIFTS {
            let s0 = Complex64::new(re, im);
            let shifted = &a_c - &e_c * s0;
            let lu = shifted.lu();
            // Skip shifts that land near the spectrum (tiny pivot ratio).
            let u = lu.u();
            let mut pivot_min = f64::INFINITY;
            let mut pivot_max = 0.0f64;
            for i in 0..n {
                let p = u[(i, i)].norm();
                pivot_min = pivot_min.min(p);
                pivot_max = pivot_max.max(p);
            }
            if !(pivot_min > 1e-13 * pivot_max) {
                continue;
            }
            let w = match lu.solve(&e_c) {
                Some(w) => w,
                None => continue,
            };
            if w.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                continue;
            }
            let theta = linalg::complex_eigenvalues(&w)?;
            let theta_max = theta.iter().fold(0.0f64, |m, t| m.max(t.norm()));
            let cutoff = 1e-9 * theta_max.max(1.0);
            return Ok(theta
                .iter()
                .filter(|t| t.norm() > cutoff)
                .map(|t| s0 + 1.0 / t)
                .collect());
        }
        Err(Error::SingularPencil {
            context: "pencil is singular at every trial shift",
        })
    }

    /// All finite poles strictly inside the stability region of the domain.
    pub fn is_stable(&self) -> Result<bool> {
        let poles = self.poles()?;
        Ok(poles.iter().all(|p| match self.domain {
            Domain::ContinuousS => p.re < 0.0,
            Domain::DiscreteZ { .. } => p.norm() < 1.0,
        }))
    }
}

impl DescriptorSs<f64> {
    /// Convert to standard form (E = I) by refitting the transfer function
    /// and re-realizing it in controllable canonical form. Biproper systems
    /// come out with an explicit feedthrough instead of a singular E.
    pub fn to_standard_form(&self) -> Result<DescriptorSs<f64>> {
        if self.e_is_identity() {
            return Ok(self.clone());
        }
        Ok(tf_to_ss(&ss_to_tf(self)?))
    }
}

/// Controllable canonical realization with E = I and explicit feedthrough.
pub fn tf_to_ss(tf: &RationalTf) -> DescriptorSs<f64> {
    let den = tf.den();
    let n = den.len() - 1;
    let mut padded = vec![0.0; den.len() - tf.num().len()];
    padded.extend_from_slice(tf.num());
    let d = padded[0];
    if n == 0 {
        return DescriptorSs::from_feedthrough(d, tf.domain());
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        a[(0, j)] = -den[j + 1];
    }
    for i in 1..n {
        a[(i, i - 1)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[0] = 1.0;
    // C realizes the strictly-proper part num - d*den.
    let c = RowDVector::from_fn(n, |_, j| padded[j + 1] - d * den[j + 1]);
    DescriptorSs::new(DMatrix::identity(n, n), a, b, c, d, tf.domain())
        .expect("canonical construction is dimensionally consistent")
}

/// Recover the rational function of a SISO descriptor realization by a
/// probe-point fit: evaluate the resolvent at 2n+2 points on a circle
/// enclosing the spectrum, solve the homogeneous linear system for the
/// coefficients, and strip common roots within relative tolerance 1e-8.
pub fn ss_to_tf(ss: &DescriptorSs<f64>) -> Result<RationalTf> {
    let n = ss.order();
    if n == 0 {
        return RationalTf::new(vec![ss.d()], vec![1.0], ss.domain());
    }
    let rho = ss
        .poles()?
        .iter()
        .fold(0.0f64, |m, p| m.max(p.norm()));
    let radius = 2.0 * rho.max(1.0);
    let m = 2 * n + 2;

    // Probes at scaled roots of unity: the Vandermonde in w = sigma/radius
    // is perfectly conditioned there, and the set is conjugate-closed so a
    // real-coefficient solution exists.
    let mut pts = Vec::with_capacity(m);
    let mut vals = Vec::with_capacity(m);
    let mut h_scale = 0.0f64;
    for k in 0..m {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
        let h = ss.eval(w * radius).map_err(|_| Error::SingularPencil {
            context: "resolvent evaluation failed on the probe circle",
        })?;
        h_scale = h_scale.max(h.norm());
        pts.push(w);
        vals.push(h);
    }

    // Homogeneous rows: num(w_k) - H_k * den(w_k) = 0, unknowns are the
    // n+1 numerator and n+1 denominator coefficients in descending powers.
    let cols = 2 * (n + 1);
    let mat = DMatrix::<Complex64>::from_fn(m, cols, |k, j| {
        if j <= n {
            pts[k].powu((n - j) as u32)
        } else {
            -vals[k] * pts[k].powu((n - (j - n - 1)) as u32)
        }
    });
    let (v, ratio) = linalg::smallest_singular_vector(&mat);
    if ratio > 1e-6 {
        return Err(Error::DegenerateFit {
            context: "no null vector: response is not rational of the declared order",
        });
    }

    // The row set is conjugate-symmetric, so the null space is spanned by
    // real vectors up to a global phase. Align the phase on the largest
    // component, then keep whichever of the real/imaginary parts carries
    // the weight (both are null vectors when the null space is real).
    let k_big = (0..v.len())
        .max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()))
        .expect("null vector is nonempty");
    let phase = v[k_big].conj() / v[k_big].norm();
    let aligned: Vec<Complex64> = v.iter().map(|x| x * phase).collect();
    let re_norm: f64 = aligned.iter().map(|x| x.re * x.re).sum::<f64>().sqrt();
    let im_norm: f64 = aligned.iter().map(|x| x.im * x.im).sum::<f64>().sqrt();
    let coeffs: Vec<f64> = if re_norm >= im_norm {
        aligned.iter().map(|x| x.re).collect()
    } else {
        aligned.iter().map(|x| x.im).collect()
    };

    // Undo the w = sigma/radius scaling coefficient by coefficient.
    let unscale = |c: &[f64]| -> Vec<f64> {
        c.iter()
            .enumerate()
            .map(|(i, &x)| x / radius.powi((n - i) as i32))
            .collect()
    };
    let num_s = unscale(&coeffs[..=n]);
    let den_s = unscale(&coeffs[n + 1..]);

    let den_s = poly::strip_leading(&den_s, 1e-9);
    let mut num_s = poly::strip_leading(&num_s, 1e-9);
    if num_s.len() > den_s.len() {
        // The resolvent is proper by construction; surplus leading
        // numerator coefficients must be fit noise.
        let surplus = num_s.len() - den_s.len();
        if poly::max_abs(&num_s[..surplus]) > 1e-6 * poly::max_abs(&num_s) {
            return Err(Error::DegenerateFit {
                context: "fit produced an improper function",
            });
        }
        num_s = poly::strip_leading(&num_s[surplus..], 0.0);
    }
    let (num_s, den_s) = strip_common_roots(&num_s, &den_s, 1e-8);
    let tf = RationalTf::new(num_s, den_s, ss.domain())?;

    // Cross-check at fresh points between the probes.
    let mut worst = 0.0f64;
    for k in 0..m {
        let w = Complex64::from_polar(1.0, PI * (2 * k + 1) as f64 / m as f64);
        let sigma = w * radius;
        let h_ss = ss.eval(sigma)?;
        let h_tf = tf.eval(sigma)?;
        worst = worst.max((h_ss - h_tf).norm());
        h_scale = h_scale.max(h_ss.norm());
    }
    if worst > 1e-6 * h_scale.max(1e-12) {
        return Err(Error::DegenerateFit {
            context: "fitted function does not reproduce the resolvent",
        });
    }
    Ok(tf)
}

/// Cancel numerator/denominator root pairs closer than rel_tol; returns the
/// inputs untouched when nothing cancels so exact coefficients survive.
fn strip_common_roots(num: &[f64], den: &[f64], rel_tol: f64) -> (Vec<f64>, Vec<f64>) {
    if num.len() < 2 || den.len() < 2 {
        return (num.to_vec(), den.to_vec());
    }
    let nz = poly::roots(num);
    let dz = poly::roots(den);
    let mut keep_n = vec![true; nz.len()];
    let mut keep_d = vec![true; dz.len()];
    let mut cancelled = 0usize;
    for (i, z) in nz.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (j, p) in dz.iter().enumerate() {
            if !keep_d[j] {
                continue;
            }
            let dist = (z - p).norm();
            if best.map_or(true, |(_, b)| dist < b) {
                best = Some((j, dist));
            }
        }
        if let Some((j, dist)) = best {
            if dist <= rel_tol * dz[j].norm().max(1.0) {
                keep_n[i] = false;
                keep_d[j] = false;
                cancelled += 1;
            }
        }
    }
    if cancelled == 0 {
        return (num.to_vec(), den.to_vec());
    }
    let kept_n: Vec<Complex64> = nz
        .iter()
        .zip(&keep_n)
        .filter(|(_, &k)| k)
        .map(|(z, _)| *z)
        .collect();
    let kept_d: Vec<Complex64> = dz
        .iter()
        .zip(&keep_d)
        .filter(|(_, &k)| k)
        .map(|(z, _)| *z)
        .collect();
    (
        poly::scale(&poly::monic_from_roots(&kept_n), num[0]),
        poly::scale(&poly::monic_from_roots(&kept_d), den[0]),
    )
}

/// Zero-order-hold discretization of a standard-form continuous system:
/// A_d = exp(AT), B_d = (integral of exp(A tau) over [0, T]) B, both read
/// off the augmented matrix exponential exp(T [[A, B], [0, 0]]).
pub fn zoh_discretize(ss: &DescriptorSs<f64>, period: f64) -> Result<DescriptorSs<f64>> {
    if ss.domain().is_discrete() {
        return Err(Error::TimeBaseMismatch {
            context: "zoh_discretize expects a continuous-time system",
        });
    }
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidSamplePeriod(period));
    }
    if !ss.e_is_identity() {
        return Err(Error::NonStandardForm);
    }
    let n = ss.order();
    let domain = Domain::DiscreteZ { period };
    if n == 0 {
        return Ok(DescriptorSs::from_feedthrough(ss.d(), domain));
    }
    let mut aug = DMatrix::<f64>::zeros(n + 1, n + 1);
    aug.view_mut((0, 0), (n, n)).copy_from(&(ss.a() * period));
    for i in 0..n {
        aug[(i, n)] = ss.b()[i] * period;
    }
    let exp = linalg::matrix_exponential(&aug);
    let ad = exp.view((0, 0), (n, n)).into_owned();
    let bd = DVector::from_fn(n, |i, _| exp[(i, n)]);
    DescriptorSs::new(DMatrix::identity(n, n), ad, bd, ss.c().clone(), ss.d(), domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal_dc_motor_controller() -> RationalTf {
        RationalTf::continuous(vec![0.5, 6.0, 10.01], vec![1.0, 2.0, 0.0]).unwrap()
    }

    #[test]
    fn first_order_canonical_form() {
        let tf = RationalTf::continuous(vec![1.0], vec![1.0, 1.0]).unwrap();
        let ss = tf_to_ss(&tf);
        assert_eq!(ss.order(), 1);
        assert_eq!(ss.a()[(0, 0)], -1.0);
        assert_eq!(ss.b()[0], 1.0);
        assert_eq!(ss.c()[0], 1.0);
        assert_eq!(ss.d(), 0.0);
        assert_eq!(ss.e()[(0, 0)], 1.0);
    }

    #[test]
    fn constant_gain_is_order_zero() {
        let tf = RationalTf::continuous(vec![5.0], vec![1.0]).unwrap();
        let ss = tf_to_ss(&tf);
        assert_eq!(ss.order(), 0);
        assert_eq!(ss.d(), 5.0);
        let v = ss.eval(Complex64::new(0.3, 1.7)).unwrap();
        assert_eq!(v, Complex64::new(5.0, 0.0));
    }

    #[test]
    fn realization_matches_tf_at_j() {
        let tf = ideal_dc_motor_controller();
        let ss = tf_to_ss(&tf);
        let p = Complex64::new(0.0, 1.0);
        let via_ss = ss.eval(p).unwrap();
        let via_tf = tf.eval(p).unwrap();
        assert!((via_ss - via_tf).norm() < 1e-12);
    }

    #[test]
    fn biproper_feedthrough_agrees_between_views() {
        let tf = RationalTf::discrete(vec![2.0, -1.0], vec![1.0, 0.5], 1.0).unwrap();
        let ss = tf_to_ss(&tf);
        assert_eq!(ss.d(), 2.0);
        for point in [Complex64::new(1.3, 0.4), Complex64::new(-0.2, 2.0)] {
            let lhs = ss.eval(point).unwrap();
            let rhs = tf.eval(point).unwrap();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn scalar_resolvent_recovers_tf() {
        let ss = DescriptorSs::new(
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 0.5),
            DVector::from_element(1, 1.0),
            RowDVector::from_element(1, 1.0),
            0.0,
            Domain::DiscreteZ { period: 1.0 },
        )
        .unwrap();
        let tf = ss_to_tf(&ss).unwrap();
        assert_eq!(tf.num().len(), 1);
        assert!((tf.num()[0] - 1.0).abs() < 1e-10);
        assert!((tf.den()[0] - 1.0).abs() < 1e-12);
        assert!((tf.den()[1] + 0.5).abs() < 1e-10);
    }

    #[test]
    fn round_trip_recovers_controller_coefficients() {
        let tf = ideal_dc_motor_controller();
        let back = ss_to_tf(&tf_to_ss(&tf)).unwrap();
        let scale = poly::max_abs(tf.num());
        for (a, b) in back.num().iter().zip(tf.num()) {
            assert!((a - b).abs() < 1e-8 * scale, "num {a} vs {b}");
        }
        for (a, b) in back.den().iter().zip(tf.den()) {
            assert!((a - b).abs() < 1e-8, "den {a} vs {b}");
        }
    }

    #[test]
    fn order_zero_resolvent_is_constant() {
        let ss = DescriptorSs::<f64>::from_feedthrough(3.0, Domain::ContinuousS);
        let tf = ss_to_tf(&ss).unwrap();
        assert_eq!(tf.num(), &[3.0]);
        assert_eq!(tf.den(), &[1.0]);
    }

    #[test]
    fn singular_e_encodes_biproper_part() {
        // Block 1 realizes 1/(s+1); block 2 has E = 0 and contributes the
        // constant -1, so H(s) = 1/(s+1) - 1 = -s/(s+1).
        let e = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 1.0]);
        let c = RowDVector::from_vec(vec![1.0, 1.0]);
        let ss = DescriptorSs::new(e, a, b, c, 0.0, Domain::ContinuousS).unwrap();

        let poles = ss.poles().unwrap();
        assert_eq!(poles.len(), 1, "infinite eigenvalue must be excluded");
        assert!((poles[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);

        let tf = ss_to_tf(&ss).unwrap();
        assert_eq!(tf.den().len(), 2);
        assert!((tf.num()[0] + 1.0).abs() < 1e-9);
        assert!(tf.num()[1].abs() < 1e-9);
        assert!((tf.den()[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn double_pole_of_reference_model() {
        let m = RationalTf::continuous(vec![1.0], vec![1.0, 2.0, 1.0]).unwrap();
        let ss = tf_to_ss(&m);
        let poles = ss.poles().unwrap();
        assert_eq!(poles.len(), 2);
        for p in poles {
            assert!((p - Complex64::new(-1.0, 0.0)).norm() < 1e-6);
        }
        assert!(ss.is_stable().unwrap());
    }

    #[test]
    fn zoh_scalar_closed_form() {
        let tf = RationalTf::continuous(vec![1.0], vec![1.0, 1.0]).unwrap();
        let d = zoh_discretize(&tf_to_ss(&tf), 2.0f64.ln()).unwrap();
        assert!((d.a()[(0, 0)] - 0.5).abs() < 1e-12);
        assert!((d.b()[0] - 0.5).abs() < 1e-12);
        assert_eq!(d.domain(), Domain::DiscreteZ { period: 2.0f64.ln() });
    }

    #[test]
    fn zoh_integrator() {
        let integ = RationalTf::continuous(vec![1.0], vec![1.0, 0.0]).unwrap();
        let d = zoh_discretize(&tf_to_ss(&integ), 0.3).unwrap();
        assert!((d.a()[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((d.b()[0] - 0.3).abs() < 1e-14);
    }

    #[test]
    fn zoh_rejects_singular_e() {
        let e = DMatrix::from_element(1, 1, 0.0);
        let a = DMatrix::from_element(1, 1, 1.0);
        let ss = DescriptorSs::new(
            e,
            a,
            DVector::from_element(1, 1.0),
            RowDVector::from_element(1, 1.0),
            0.0,
            Domain::ContinuousS,
        )
        .unwrap();
        assert!(matches!(
            zoh_discretize(&ss, 0.1),
            Err(Error::NonStandardForm)
        ));
    }

    #[test]
    fn standard_form_removes_singular_e() {
        let e = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 1.0]);
        let c = RowDVector::from_vec(vec![1.0, 1.0]);
        let ss = DescriptorSs::new(e, a, b, c, 0.0, Domain::ContinuousS).unwrap();
        let std = ss.to_standard_form().unwrap();
        assert_eq!(std.order(), 1);
        assert!((std.d() + 1.0).abs() < 1e-9, "feedthrough moved into D");
        for point in [Complex64::new(0.0, 0.7), Complex64::new(1.0, -2.0)] {
            let lhs = ss.eval(point).unwrap();
            let rhs = std.eval(point).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }
}
