//! Core LTI system types: rational transfer functions, descriptor
//! state-space realizations, discretization and step simulation.

mod sim;
mod ss;
mod tf;

pub use sim::{step_response, step_response_tf, SimulationTrace};
pub use ss::{ss_to_tf, tf_to_ss, zoh_discretize, DescriptorSs, Scalar};
pub use tf::{tustin_discretize, RationalTf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Variable domain of a system: the Laplace s-plane or the z-plane of a
/// sampled system with a fixed period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// Continuous time; evaluation points live on the imaginary axis.
    ContinuousS,
    /// Discrete time with sample period in seconds; evaluation points live
    /// on the unit circle.
    DiscreteZ { period: f64 },
}

impl Domain {
    /// Sample period, if discrete.
    pub fn period(&self) -> Option<f64> {
        match self {
            Domain::ContinuousS => None,
            Domain::DiscreteZ { period } => Some(*period),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Domain::DiscreteZ { .. })
    }
}

/// Sampling configuration derived from the period T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    period: f64,
}

impl SamplingConfig {
    pub fn new(period: f64) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidSamplePeriod(period));
        }
        Ok(Self { period })
    }

    /// Sample period T in seconds.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Sampling frequency omega_s = 2*pi/T in rad/s.
    pub fn sampling_frequency(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.period
    }

    /// Nyquist frequency omega_N = pi/T in rad/s.
    pub fn nyquist_frequency(&self) -> f64 {
        std::f64::consts::PI / self.period
    }
}
