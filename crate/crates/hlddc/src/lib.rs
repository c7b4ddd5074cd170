//! Hybrid Loewner data-driven control.

pub mod error;
mod linalg;
pub mod loewner;
pub mod lti;
mod poly;

pub use error::{Error, Result};
pub use loewner::{
    build_pencil, conjugate_close, interpolation_error, numerical_order, partition, realify,
    realize, ComplexRealization, ErrorReport, InterpolationSet, LoewnerPencil, NodeError,
    OrderDecision, Plane, DEFAULT_RANK_TOL,
};
pub use lti::{
    ss_to_tf, step_response, step_response_tf, tf_to_ss, tustin_discretize, zoh_discretize,
    DescriptorSs, Domain, RationalTf, SamplingConfig, Scalar, SimulationTrace,
};
