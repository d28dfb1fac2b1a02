//! Shared parameter and state types.
//!
//! Notation used throughout the crate: `a` is the probability an infected
//! node remains infected through one step (one minus the per-step cure
//! probability), `b` is the probability an infected neighbor transmits the
//! infection along an edge in one step. The synchronous update for node `i`
//! with neighbors `j` is
//!
//! ```text
//! p'[i] = 1 − (1 − a·p[i]) · ∏_j (1 − b·p[j])
//! ```
//!
//! i.e. node `i` is infected next step unless it both sheds its own infection
//! and dodges every neighbor's transmission attempt.

use crate::error::Error;

/// Transmission/retention probability pair, both strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    a: f64,
    b: f64,
}

impl Params {
    pub fn new(a: f64, b: f64) -> Result<Self, Error> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                range: "(0, 1)",
            });
        }
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::OutOfRange {
                name: "b",
                value: b,
                range: "(0, 1)",
            });
        }
        Ok(Self { a, b })
    }

    /// Probability an infected node stays infected for one step.
    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Per-edge transmission probability.
    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// A star's parameters: the shared `(a, b)` pair plus the spoke count `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarParams {
    params: Params,
    n: u32,
}

impl StarParams {
    pub fn new(params: Params, n: u32) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::CountTooSmall {
                what: "spoke count n",
                min: 1,
            });
        }
        Ok(Self { params, n })
    }

    /// Convenience constructor validating all three values at once.
    pub fn from_parts(a: f64, b: f64, n: u32) -> Result<Self, Error> {
        Self::new(Params::new(a, b)?, n)
    }

    #[inline]
    pub fn params(&self) -> Params {
        self.params
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.params.a()
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.params.b()
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Reduced state of a star: hub probability `x`, common spoke probability `y`.
///
/// Fields are public for ergonomic numerics; use [`State2::new`] at trust
/// boundaries to enforce the unit-square invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2 {
    pub x: f64,
    pub y: f64,
}

impl State2 {
    pub const ORIGIN: State2 = State2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange {
                name: "x",
                value: x,
                range: "[0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::OutOfRange {
                name: "y",
                value: y,
                range: "[0, 1]",
            });
        }
        Ok(Self { x, y })
    }

    /// Sup-norm distance to another state.
    #[inline]
    pub fn sup_dist(self, other: State2) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    /// Componentwise `<=`.
    #[inline]
    pub fn le(self, other: State2) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

/// `base^n` by sequential multiplication.
///
/// The full-graph update folds one factor per neighbor; using the same fold
/// here keeps the reduced maps bit-identical to the full recursion on
/// homogeneous states (not merely close). Degrees are small, so the O(n) cost
/// is irrelevant.
#[inline]
pub(crate) fn unit_pow(base: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= base;
    }
    acc
}
