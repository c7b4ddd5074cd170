//! Rational transfer functions in coefficient form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Domain;
use crate::error::{Error, Result};
use crate::poly;

/// SISO rational transfer function with real coefficients in descending
/// powers of the domain variable. The denominator is kept monic and the
/// function proper (numerator degree <= denominator degree).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalTf {
    num: Vec<f64>,
    den: Vec<f64>,
    domain: Domain,
}

impl RationalTf {
    /// Build a transfer function, normalizing the denominator to monic form.
    /// Leading zeros of either polynomial are stripped first.
    pub fn new(num: Vec<f64>, den: Vec<f64>, domain: Domain) -> Result<Self> {
        let num = poly::strip_leading(&num, 0.0);
        let den = poly::strip_leading(&den, 0.0);
        let lead = *den.first().ok_or(Error::ZeroDenominator)?;
        if lead == 0.0 || !lead.is_finite() {
            return Err(Error::ZeroDenominator);
        }
        if num.len() > den.len() && poly::max_abs(&num) > 0.0 {
            return Err(Error::ImproperTf {
                num_deg: num.len() - 1,
                den_deg: den.len() - 1,
            });
        }
        if let Domain::DiscreteZ { period } = domain {
            if !(period > 0.0) {
                return Err(Error::InvalidSamplePeriod(period));
            }
        }
        Ok(Self {
            num: poly::scale(&num, 1.0 / lead),
            den: poly::scale(&den, 1.0 / lead),
            domain,
        })
    }

    pub fn continuous(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        Self::new(num, den, Domain::ContinuousS)
    }

    pub fn discrete(num: Vec<f64>, den: Vec<f64>, period: f64) -> Result<Self> {
        Self::new(num, den, Domain::DiscreteZ { period })
    }

    /// Constant gain in the given domain.
    pub fn constant(gain: f64, domain: Domain) -> Self {
        Self {
            num: vec![gain],
            den: vec![1.0],
            domain,
        }
    }

    /// Numerator coefficients, descending powers.
    pub fn num(&self) -> &[f64] {
        &self.num
    }

    /// Denominator coefficients, descending powers (monic).
    pub fn den(&self) -> &[f64] {
        &self.den
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Denominator degree.
    pub fn order(&self) -> usize {
        self.den.len() - 1
    }

    /// True when numerator and denominator degrees coincide and the
    /// feedthrough is nonzero.
    pub fn is_biproper(&self) -> bool {
        self.num.len() == self.den.len() && self.num[0] != 0.0
    }

    /// Evaluate at a complex point by Horner's rule.
    ///
    /// Returns [`Error::PoleHit`] when the denominator cancels to below
    /// machine scale relative to its coefficient magnitudes.
    pub fn eval(&self, point: Complex64) -> Result<Complex64> {
        let den_val = poly::eval(&self.den, point);
        let den_mag = poly::eval_magnitude(&self.den, point);
        if den_val.norm() <= 100.0 * f64::EPSILON * den_mag {
            return Err(Error::PoleHit { point });
        }
        Ok(poly::eval(&self.num, point) / den_val)
    }

    /// Frequency response at omega (rad/s): the point is j*omega on the
    /// s-plane or e^{j omega T} on the z-plane.
    pub fn frequency_response(&self, omega: f64) -> Result<Complex64> {
        self.eval(self.domain_point(omega))
    }

    /// Map a frequency to the evaluation point of this domain.
    pub fn domain_point(&self, omega: f64) -> Complex64 {
        match self.domain {
            Domain::ContinuousS => Complex64::new(0.0, omega),
            Domain::DiscreteZ { period } => Complex64::from_polar(1.0, omega * period),
        }
    }

    /// Poles: roots of the denominator.
    pub fn poles(&self) -> Vec<Complex64> {
        poly::roots(&self.den)
    }

    /// All poles strictly inside the stability region of the domain.
    pub fn is_stable(&self) -> bool {
        self.poles().iter().all(|p| match self.domain {
            Domain::ContinuousS => p.re < 0.0,
            Domain::DiscreteZ { .. } => p.norm() < 1.0,
        })
    }
}

/// Bilinear (Tustin) discretization: substitute s = (2/T)(z-1)/(z+1) and
/// clear denominators. The static gain at z = 1 matches the continuous gain
/// at s = 0 whenever both are finite.
pub fn tustin_discretize(sys: &RationalTf, period: f64) -> Result<RationalTf> {
    if sys.domain().is_discrete() {
        return Err(Error::DimensionMismatch {
            context: "tustin_discretize expects a continuous-time system",
        });
    }
    if !(period > 0.0) {
        return Err(Error::InvalidSamplePeriod(period));
    }
    let n = sys.den.len() - 1;
    let alpha = 2.0 / period;
    // Clearing the common (z+1)^n factor maps a term c*s^deg to
    // c * alpha^deg * (z-1)^deg * (z+1)^(n-deg); every mapped term has
    // degree exactly n, so the sums align on the constant coefficient.
    let map = |coeffs: &[f64]| -> Vec<f64> {
        let mut acc = vec![0.0];
        for (i, &c) in coeffs.iter().enumerate() {
            let deg = coeffs.len() - 1 - i;
            let mut term = vec![c * alpha.powi(deg as i32)];
            for _ in 0..deg {
                term = poly::mul(&term, &[1.0, -1.0]);
            }
            for _ in 0..(n - deg) {
                term = poly::mul(&term, &[1.0, 1.0]);
            }
            acc = poly::add(&acc, &term);
        }
        acc
    };
    let num_d = map(&sys.num);
    let den_d = map(&sys.den);
    RationalTf::discrete(num_d, den_d, period)
}
