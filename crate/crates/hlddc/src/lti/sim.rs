//! Step-response simulation on a fixed time grid.

use nalgebra::DVector;

use super::ss::{tf_to_ss, zoh_discretize, DescriptorSs};
use super::tf::RationalTf;
use super::Domain;
use crate::error::{Error, Result};

/// Time-domain trace of the model-reference loop signals (reference r,
/// sampled tracking error eps, control u, plant output y, reference-model
/// mismatch e). Open-loop step responses fill r and u with the step and
/// leave eps and e at zero; all arrays share one time grid.
#[derive(Debug, Clone)]
pub struct SimulationTrace {
    pub time: Vec<f64>,
    pub r: Vec<f64>,
    pub eps: Vec<f64>,
    pub u: Vec<f64>,
    pub y: Vec<f64>,
    pub e: Vec<f64>,
    /// Indices into `time` where the discrete controller updated.
    pub sample_instants: Vec<usize>,
}

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    /// Mean of the trailing 10% of the output: a final-value estimate for
    /// traces that have settled.
    pub fn final_value_estimate(&self) -> f64 {
        let n = self.y.len();
        if n == 0 {
            return f64::NAN;
        }
        let tail = (n / 10).max(1);
        self.y[n - tail..].iter().sum::<f64>() / tail as f64
    }
}

/// Unit-step response. Continuous systems are ZOH-discretized at `dt` and
/// stepped (exact at the grid points for a piecewise-constant input);
/// discrete systems are stepped at their native period and `dt` is ignored.
pub fn step_response(sys: &DescriptorSs<f64>, duration: f64, dt: f64) -> Result<SimulationTrace> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(Error::InvalidRange {
            lo: 0.0,
            hi: duration,
        });
    }
    let std = sys.to_standard_form()?;
    let (disc, h, discrete_native) = match std.domain() {
        Domain::ContinuousS => {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(Error::InvalidSamplePeriod(dt));
            }
            (zoh_discretize(&std, dt)?, dt, false)
        }
        Domain::DiscreteZ { period } => (std, period, true),
    };
    let steps = (duration / h).floor() as usize;
    let len = steps + 1;

    let n = disc.order();
    let mut x = DVector::<f64>::zeros(n);
    let mut time = Vec::with_capacity(len);
    let mut y = Vec::with_capacity(len);
    for k in 0..len {
        time.push(k as f64 * h);
        let mut out = disc.d();
        for i in 0..n {
            out += disc.c()[i] * x[i];
        }
        y.push(out);
        x = disc.a() * &x + disc.b();
    }
    let sample_instants = if discrete_native {
        (0..len).collect()
    } else {
        vec![]
    };
    Ok(SimulationTrace {
        time,
        r: vec![1.0; len],
        eps: vec![0.0; len],
        u: vec![1.0; len],
        y,
        e: vec![0.0; len],
        sample_instants,
    })
}

/// Unit-step response of a transfer function via its canonical realization.
pub fn step_response_tf(tf: &RationalTf, duration: f64, dt: f64) -> Result<SimulationTrace> {
    step_response(&tf_to_ss(tf), duration, dt)
}
