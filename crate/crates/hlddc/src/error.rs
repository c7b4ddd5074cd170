//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by system construction, interpolation and synthesis.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Denominator is empty or its leading coefficient is zero.
    #[error("denominator must have a nonzero leading coefficient")]
    ZeroDenominator,

    /// Numerator degree exceeds denominator degree.
    #[error("improper transfer function: numerator degree {num_deg} > denominator degree {den_deg}")]
    ImproperTf { num_deg: usize, den_deg: usize },

    /// Evaluation point is (numerically) a pole of the system.
    #[error("evaluation point {point} hits a pole")]
    PoleHit { point: Complex64 },

    /// Matrix pencil (sigma*E - A) is singular for every probe point.
    #[error("singular matrix pencil: {context}")]
    SingularPencil { context: &'static str },

    /// Rational fit of a state-space resolvent collapsed.
    #[error("degenerate rational fit: {context}")]
    DegenerateFit { context: &'static str },

    /// Operation requires a standard-form system (E = I).
    #[error("descriptor system is not in standard form (E != I)")]
    NonStandardForm,

    /// Sampling period or grid parameter out of range.
    #[error("invalid sampling period: T = {0} (must be > 0)")]
    InvalidSamplePeriod(f64),

    /// Matrix or vector dimensions do not conform.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: &'static str },

    /// Interpolation nodes are not pairwise distinct.
    #[error("duplicate interpolation node {node}")]
    DuplicateNode { node: Complex64 },

    /// A node and its conjugate carry inconsistent values.
    #[error("inconsistent conjugate data at node {node}: |v - conj(v')| = {residual:.3e}")]
    InconsistentConjugate { node: Complex64, residual: f64 },

    /// Not enough interpolation data to split into left/right sets.
    #[error("too few interpolation points: {got} conjugate group(s), need at least {need}")]
    TooFewPoints { got: usize, need: usize },

    /// A left node coincides with a right node.
    #[error("left node {left} collides with right node {right}")]
    NodeCollision { left: Complex64, right: Complex64 },

    /// Complex realization retains imaginary parts beyond tolerance.
    #[error("residual imaginary part {residual:.3e} exceeds tolerance (conjugate symmetry broken upstream)")]
    ResidualImaginary { residual: f64 },

    /// Requested realization order is out of range.
    #[error("realization order {r} out of range [1, {max}]")]
    OrderOutOfRange { r: usize, max: usize },

    /// Plant frequency sample is (numerically) zero.
    #[error("plant sample is zero at omega = {omega} rad/s")]
    SingularPlantSample { omega: f64 },

    /// Reference model response is 1 at a grid point, so (1 - M) is singular.
    #[error("reference model saturates (M ~ 1) at omega = {omega} rad/s")]
    ReferenceSaturated { omega: f64 },

    /// A grid frequency is at or above the Nyquist frequency.
    #[error("frequency {omega} rad/s is at or above the Nyquist frequency {nyquist} rad/s")]
    AboveNyquist { omega: f64, nyquist: f64 },

    /// Zero-order-hold response vanishes at a grid frequency.
    #[error("hold response vanishes at omega = {omega} rad/s")]
    HoldZero { omega: f64 },

    /// Frequency grid bounds are inverted or empty.
    #[error("invalid frequency range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },

    /// Frequencies must be strictly increasing and positive.
    #[error("frequencies must be positive and strictly increasing (violation at index {index})")]
    UnsortedFrequencies { index: usize },

    /// Reference model must be strictly stable for synthesis.
    #[error("reference model is not strictly stable")]
    UnstableReference,

    /// Hybrid simulation oversampling factor below the minimum.
    #[error("oversample factor {0} must be at least 2")]
    InvalidOversample(usize),

    /// The feedback interconnection has a singular algebraic loop.
    #[error("algebraic loop is singular: |1 + F| = {magnitude:.3e}")]
    AlgebraicLoopSingularity { magnitude: f64 },

    /// Simulation produced a non-finite signal value.
    #[error("simulation diverged to a non-finite value at t = {time}")]
    DivergedSimulation { time: f64 },

    /// Two traces do not share a common time base.
    #[error("traces do not share a time base: {context}")]
    TimeBaseMismatch { context: &'static str },

    /// Eigenvector matrix too ill-conditioned for spectral projection.
    #[error("defective spectrum: eigenvector condition ~{cond:.3e}")]
    DefectiveSpectrum { cond: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
