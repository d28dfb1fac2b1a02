//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong constructing inputs or running solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument violated its documented range.
    #[error("{name} = {value} is outside its valid range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A count (spokes, levels, steps, samples, ...) is below its minimum.
    #[error("{what} must be at least {min}")]
    CountTooSmall { what: &'static str, min: usize },

    /// A state vector does not match the structure it is used with.
    #[error("state length {got} does not match expected length {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Operation requires a 2-level star (one hub, n leaves).
    #[error("topology is not a 2-level star")]
    NotAStar,

    /// The inverse spoke curve leaves the unit square at this height.
    #[error("phi2 inverse exits the unit square at y = {y}")]
    CurveExitsUnitSquare { y: f64 },

    /// Operation only meaningful above the epidemic threshold.
    #[error("parameters are not supercritical (b must exceed (1-a)/sqrt(n))")]
    NotSupercritical,

    /// Operation only meaningful strictly below the epidemic threshold.
    #[error("parameters are not subcritical (b must stay below (1-a)/sqrt(n))")]
    NotSubcritical,

    /// Input must lie strictly inside monotone region I or III.
    #[error("point is not strictly inside region I or III")]
    NotInMonotoneRegion,

    /// An envelope corner fails its region/positivity precondition.
    #[error("envelope {which} corner is invalid: {why}")]
    BadEnvelopeCorner {
        which: &'static str,
        why: &'static str,
    },

    /// The closed form's denominator vanishes here; fall back to the solver.
    #[error("closed form singular here (denominator {denominator:e}); use the numeric solver")]
    ClosedFormSingular { denominator: f64 },

    /// A solver exceeded its iteration cap or failed its residual check.
    /// For in-range parameters this signals a bug, not a user error.
    #[error("solver failed to converge within {iterations} iterations")]
    SolverFailed { iterations: usize },

    /// Sampling could not find enough points inside the requested region.
    #[error("found only {found} of {requested} samples in region {region}")]
    TooFewSamples {
        region: &'static str,
        requested: usize,
        found: usize,
    },

    /// A sweep or bisection domain is empty or degenerate.
    #[error("{what}")]
    DegenerateDomain { what: &'static str },
}
