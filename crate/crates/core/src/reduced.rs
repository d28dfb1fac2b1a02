//! The two-variable reduced system for a star.
//!
//! With every spoke at the same probability (which heterogeneous spokes
//! approach anyway, see [`crate::graph::spread_decay_factor`]), the full
//! recursion on a star collapses to a planar map of the hub/spoke pair:
//!
//! ```text
//! F(x, y) = ( 1 − (1 − a·x)(1 − b·y)ⁿ ,  1 − (1 − a·y)(1 − b·x) )
//! ```
//!
//! The rest of the crate grows out of this map. The partial-fixed-point
//! curves φ₁ (hub coordinate stationary) and φ₂ (spoke coordinate
//! stationary) intersect exactly at fixed points of F, and the sign of
//! `b − (1−a)/√n` decides whether the only intersection inside the unit
//! square is the origin:
//!
//! * φ₁(y) = (1 − (1−b·y)ⁿ) / (1 − a·(1−b·y)ⁿ) — hub level that is
//!   reproduced exactly when the spokes sit at y; increasing and concave.
//! * φ₂:  y = b·x/(1−a+a·b·x) as a function of x, or equivalently
//!   x = (1−a)·y/(b·(1−a·y)) as a function of y; increasing and convex.
//!
//! Their slopes at the origin are b·n/(1−a) and (1−a)/b, so the curves
//! separate (and a second intersection appears) exactly when b² n > (1−a)².

use crate::error::Error;
use crate::params::{unit_pow, Params, StarParams, State2};

/// Position of `b` relative to the epidemic threshold `(1−a)/√n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "Subcritical",
            Regime::Critical => "Critical",
            Regime::Supercritical => "Supercritical",
        })
    }
}

/// Outcome of [`solve_fixed_points`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    /// The extinction state (0, 0), a fixed point for every parameter choice.
    pub trivial: State2,
    /// The interior fixed point; present exactly in the supercritical regime.
    pub nontrivial: Option<State2>,
    pub regime: Regime,
    /// Sup-norm of `F(p) − p` at the reported point (0 when only the trivial
    /// point is reported).
    pub residual: f64,
}

/// Residual bound the solver must meet at a reported interior fixed point.
pub const FIXED_POINT_RESIDUAL_TOL: f64 = 1e-12;

/// One application of the reduced map F.
pub fn apply_f(sp: StarParams, s: State2) -> State2 {
    debug_assert!((0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.y));
    let (a, b) = (sp.a(), sp.b());
    State2 {
        x: 1.0 - (1.0 - a * s.x) * unit_pow(1.0 - b * s.y, sp.n()),
        y: 1.0 - (1.0 - a * s.y) * (1.0 - b * s.x),
    }
}

/// Hub level that is exactly reproduced when the spokes sit at `y`:
/// the unique solution of `x = 1 − (1−a·x)(1−b·y)ⁿ`.
pub fn phi1(sp: StarParams, y: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&y));
    let u = unit_pow(1.0 - sp.b() * y, sp.n());
    (1.0 - u) / (1.0 - sp.a() * u)
}

/// First and second derivative of [`phi1`].
///
/// The first is strictly positive, the second strictly negative on [0, 1]:
/// the curve rises and flattens.
pub fn phi1_derivatives(sp: StarParams, y: f64) -> (f64, f64) {
    debug_assert!((0.0..=1.0).contains(&y));
    let (a, b) = (sp.a(), sp.b());
    let n = sp.n();
    let nf = n as f64;
    let c = 1.0 - b * y;
    let u = unit_pow(c, n);
    let denom = 1.0 - a * u;
    let first = nf * b * (1.0 - a) * unit_pow(c, n - 1) / (denom * denom);
    let second = if n == 1 {
        // c^{n-2}·((n−1) + a(n+1)c) collapses to 2a for a single spoke
        -2.0 * a * b * b * (1.0 - a) / (denom * denom * denom)
    } else {
        let bracket = (nf - 1.0) + a * (nf + 1.0) * u;
        -nf * b * b * (1.0 - a) * unit_pow(c, n - 2) * bracket / (denom * denom * denom)
    };
    (first, second)
}

/// Spoke level exactly reproduced when the hub sits at `x`:
/// the unique solution of `y = 1 − (1−a·y)(1−b·x)`.
pub fn phi2_of_x(p: Params, x: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x));
    let (a, b) = (p.a(), p.b());
    b * x / (1.0 - a + a * b * x)
}

/// Inverse of [`phi2_of_x`]: the hub level whose stationary spoke level is `y`.
///
/// Defined only while the x-value stays inside the unit square, i.e. for
/// `y` up to [`phi2_inverse_domain_end`]; beyond that the curve has exited
/// through x = 1 and the error is returned.
pub fn phi2_of_y(p: Params, y: f64) -> Result<f64, Error> {
    debug_assert!((0.0..=1.0).contains(&y));
    let (a, b) = (p.a(), p.b());
    if (1.0 - a) * y > b * (1.0 - a * y) {
        return Err(Error::CurveExitsUnitSquare { y });
    }
    Ok(phi2_inverse_unchecked(p, y))
}

/// Largest `y` for which [`phi2_of_y`] is still inside the unit square:
/// `b/(1−a+a·b)`, always strictly below 1.
pub fn phi2_inverse_domain_end(p: Params) -> f64 {
    let (a, b) = (p.a(), p.b());
    b / (1.0 - a + a * b)
}

/// The φ₂ inverse formula without the unit-square check. The value exceeds 1
/// past the domain end, which the solver uses freely for sign tests.
#[inline]
fn phi2_inverse_unchecked(p: Params, y: f64) -> f64 {
    let (a, b) = (p.a(), p.b());
    (1.0 - a) * y / (b * (1.0 - a * y))
}

/// Epidemic threshold: the infection persists in the long run iff
/// `b > (1−a)/√n`.
pub fn threshold(a: f64, n: u32) -> f64 {
    assert!(a > 0.0 && a < 1.0, "a = {a} outside (0, 1)");
    assert!(n >= 1, "spoke count must be positive");
    (1.0 - a) / (n as f64).sqrt()
}

/// Position of `b` relative to [`threshold`]. Critical means exact
/// floating-point equality with the computed threshold; sweeps should treat
/// it as measure-zero.
pub fn classify_regime(sp: StarParams) -> Regime {
    let t = threshold(sp.a(), sp.n());
    if sp.b() < t {
        Regime::Subcritical
    } else if sp.b() > t {
        Regime::Supercritical
    } else {
        Regime::Critical
    }
}

const BRACKET_SCAN_POINTS: usize = 10_000;
const BISECTION_WIDTH: f64 = 1e-14;
/// Under-relaxation for the post-bisection refinement sweeps.
const REFINE_DAMPING: f64 = 0.7;

/// All fixed points of F in the unit square.
///
/// The trivial point is always reported. In the supercritical regime the
/// interior point is found as the unique root of `h(y) = φ₁(y) − φ₂⁻¹(y)`:
/// a scan locates the sign change (with a geometric fallback toward 0 for
/// near-threshold parameters, where the positive stretch of h is thinner
/// than the scan step), bisection narrows it to 1e−14 in y, and five damped
/// sweeps of F polish the pair. Errors only if the final residual misses
/// [`FIXED_POINT_RESIDUAL_TOL`], which for valid parameters signals a bug.
pub fn solve_fixed_points(sp: StarParams) -> Result<FixedPointReport, Error> {
    let regime = classify_regime(sp);
    if regime != Regime::Supercritical {
        return Ok(FixedPointReport {
            trivial: State2::ORIGIN,
            nontrivial: None,
            regime,
            residual: 0.0,
        });
    }

    let p = sp.params();
    let h = |y: f64| phi1(sp, y) - phi2_inverse_unchecked(p, y);
    let y_end = phi2_inverse_domain_end(p);

    // h > 0 on (0, y*) and h < 0 on (y*, y_end]: find a bracket.
    let mut y_lo = f64::NAN;
    let mut y_hi = f64::NAN;
    let scan_step = y_end / (BRACKET_SCAN_POINTS as f64 + 1.0);
    for k in 1..=BRACKET_SCAN_POINTS {
        let y = scan_step * k as f64;
        if h(y) > 0.0 {
            if y_lo.is_nan() {
                y_lo = y;
            }
        } else if !y_lo.is_nan() {
            y_hi = y;
            break;
        } else {
            break; // root already below the first scan point
        }
    }
    if y_lo.is_nan() {
        y_hi = scan_step;
        let mut y = scan_step;
        for _ in 0..200 {
            y *= 0.5;
            if h(y) > 0.0 {
                y_lo = y;
                break;
            }
        }
        if y_lo.is_nan() {
            return Err(Error::SolverFailed {
                iterations: BRACKET_SCAN_POINTS + 200,
            });
        }
    } else if y_hi.is_nan() {
        y_hi = y_end; // φ₂⁻¹(y_end) = 1 > φ₁(y_end), so h < 0 here
    }

    let (mut lo, mut hi) = (y_lo, y_hi);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y_star = 0.5 * (lo + hi);
    let mut s = State2 {
        x: phi1(sp, y_star),
        y: y_star,
    };
    for _ in 0..5 {
        let f = apply_f(sp, s);
        s = State2 {
            x: s.x + REFINE_DAMPING * (f.x - s.x),
            y: s.y + REFINE_DAMPING * (f.y - s.y),
        };
    }

    let residual = s.sup_dist(apply_f(sp, s));
    if residual > FIXED_POINT_RESIDUAL_TOL {
        return Err(Error::SolverFailed {
            iterations: BRACKET_SCAN_POINTS,
        });
    }
    debug_assert!(s.x > 0.0 && s.x < 1.0 && s.y > 0.0 && s.y < 1.0);
    Ok(FixedPointReport {
        trivial: State2::ORIGIN,
        nontrivial: Some(s),
        regime,
        residual,
    })
}

// ---------------------------------------------------------------------------
