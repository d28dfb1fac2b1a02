//! Discrete-time infection dynamics on stars and starlike trees.
//!
//! A node keeps its infection through a step with probability `a` and
//! receives it along each edge from an infected neighbor with probability
//! `b`; updates are synchronous and independent, giving the per-node mean
//! recursion
//!
//! ```text
//! p'[i] = 1 − (1 − a·p[i]) · ∏_{j ∼ i} (1 − b·p[j])
//! ```
//!
//! On a hub with `n` identical spokes this collapses exactly to a planar map
//! in the hub probability `x` and common spoke probability `y` — bit for bit,
//! not approximately (see [`validate`]). The crate provides:
//!
//! * [`graph`] — the full per-node recursion on explicit topologies, used as
//!   the ground truth the reduced maps are checked against.
//! * [`reduced`] — the planar map, its partial-fixed-point curves, the
//!   extinction/survival threshold `b = (1−a)/√n`, and a certified interior
//!   fixed-point solver.
//! * [`dynamics`] — region classification, monotone envelope iteration that
//!   certifies convergence for whole rectangles of starts, and a sampler for
//!   the region-exchange behavior of the non-monotone regions.
//! * [`spectral`] — Jacobians, a mean-value linearization with certified row
//!   parameters, 2×2 eigenvalues, contraction scans, and the single-spoke-
//!   level closed forms with their cross-checks.
//! * [`multilevel`] — the per-level reduction for trees whose levels have
//!   uniform branching, its fixed points, and empirical thresholds (which
//!   expose where the naive √(Σnᵢ) threshold guess breaks down).
//! * [`scalar`] — the one-spoke system, fully closed-form.
//! * [`validate`] — exact reduction cross-checks and the spoke-spread
//!   homogenization law.
//!
//! All probabilities live in `[0, 1]` and parameters strictly inside
//! `(0, 1)`; constructors enforce this so the numeric kernels can assume it.

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod multilevel;
pub mod params;
pub mod reduced;
pub mod scalar;
pub mod spectral;
pub mod validate;

pub use dynamics::{
    Envelope, FlipLabel, FlipReport, LimitKind, Region, Trajectory, DEFAULT_MAX_ITERS,
};
pub use error::Error;
pub use graph::{FullState, GraphTopology};
pub use multilevel::{LevelParams, StateL};
pub use params::{Params, StarParams, State2};
pub use reduced::{FixedPointReport, Regime};
pub use scalar::ScalarReport;
pub use spectral::{Matrix2, SpectralReport, SweepRecord};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Convergence tolerance used by operations that do not take an explicit one.
pub const DEFAULT_TOL: f64 = 1e-10;
