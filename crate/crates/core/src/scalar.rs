//! The single-spoke system collapsed to one variable.
//!
//! With one spoke, hub and spoke play symmetric roles and the diagonal
//! `{x = y}` is invariant, so the whole system is the scalar iteration
//! `f(x) = 1 − (1−a·x)(1−b·x)`. Everything about it is closed-form: the
//! interior fixed point `(a+b−1)/(ab)` exists exactly when `a + b > 1`
//! (matching the planar threshold `b > 1−a`), the derivative is linear and
//! crosses 1 at half the fixed point, and `0 < f'(x) ≤ a + b` on the unit
//! interval, which already yields geometric extinction when `a + b < 1`.

use crate::params::Params;

/// Closed-form summary of the scalar system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarReport {
    /// Interior fixed point `(a+b−1)/(ab)`; present exactly when `a+b > 1`.
    pub x_f: Option<f64>,
    /// `x_f/2`, the point where the derivative passes through 1: below it
    /// iterates outrun the identity, above it the map contracts.
    pub x_c: Option<f64>,
    /// `f'(0) = a + b`, the largest slope on the interval.
    pub f_prime_at_0: f64,
    /// `f'(1) = a + b − 2ab`, always strictly positive.
    pub f_prime_at_1: f64,
}

/// One application of `f(x) = 1 − (1−a·x)(1−b·x)`.
pub fn f_scalar(p: Params, x: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x));
    let (a, b) = (p.a(), p.b());
    1.0 - (1.0 - a * x) * (1.0 - b * x)
}

/// `f'(x) = (a+b) − 2abx`: linear, decreasing, positive on [0, 1].
pub fn f_scalar_derivative(p: Params, x: f64) -> f64 {
    let (a, b) = (p.a(), p.b());
    (a + b) - 2.0 * a * b * x
}

/// Evaluates every closed form of the scalar system.
pub fn scalar_report(p: Params) -> ScalarReport {
    let (a, b) = (p.a(), p.b());
    let (x_f, x_c) = if a + b > 1.0 {
        let xf = (a + b - 1.0) / (a * b);
        (Some(xf), Some(xf / 2.0))
    } else {
        (None, None)
    };
    ScalarReport {
        x_f,
        x_c,
        f_prime_at_0: a + b,
        f_prime_at_1: (a + b) - 2.0 * a * b,
    }
}

/// Iterates `f` from `x0` until the step and fixed-point residual both drop
/// below `tol`, or the budget runs out. Returns the final value, the number
/// of applications, and whether it converged.
pub fn iterate_scalar(p: Params, x0: f64, max_iters: usize, tol: f64) -> (f64, usize, bool) {
    assert!(tol > 0.0, "tolerance must be positive");
    debug_assert!((0.0..=1.0).contains(&x0));
    let mut cur = x0;
    for k in 1..=max_iters {
        let next = f_scalar(p, cur);
        let step = (next - cur).abs();
        cur = next;
        if step < tol && (f_scalar(p, cur) - cur).abs() < tol {
            return (cur, k, true);
        }
    }
    (cur, max_iters, false)
}

// ---------------------------------------------------------------------------
