//! Linearizations of the reduced map and what they say about stability.
//!
//! The derivative of the reduced map is a 2×2 matrix whose entries live in
//! a one-signed family, so its eigenvalues are real and closed-form. Three
//! uses recur:
//!
//! * at the origin the matrix is `[[a, n·b], [b, a]]` with eigenvalues
//!   `a ± b·√n` — the threshold in linear form;
//! * along the segment from 0 to any state, a mean-value form of the matrix
//!   exactly transports states, which under subcritical parameters is a
//!   contraction (checked here by grid maximization);
//! * at the interior fixed point of the two-spoke star everything is
//!   algebraically closed-form, enabling eigenvalue sweeps along parameter
//!   lines.

use crate::error::Error;
use crate::params::{unit_pow, Params, StarParams, State2};
use crate::reduced::{classify_regime, phi2_of_x, solve_fixed_points, threshold, Regime};

/// Dense 2×2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Matrix2 {
    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (
            self.m11 * v.0 + self.m12 * v.1,
            self.m21 * v.0 + self.m22 * v.1,
        )
    }
}

/// Eigenvalue summary of a 2×2 matrix.
///
/// For real eigenvalues `lambda1 ≥ lambda2`, their sum/product reproduce
/// trace/determinant to rounding, and `contraction` means both moduli are
/// below 1. When the discriminant is negative both fields carry the shared
/// real part and `contraction` is decided by the determinant (the squared
/// modulus); the matrix families built by this module never reach that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralReport {
    pub matrix: Matrix2,
    pub lambda1: f64,
    pub lambda2: f64,
    pub discriminant: f64,
    pub contraction: bool,
}

/// Closed-form eigenvalues from trace and determinant.
///
/// The larger-magnitude root comes straight from the quadratic formula and
/// the other from the product, which avoids cancellation when the roots are
/// far apart.
pub fn eig2(mat: Matrix2) -> SpectralReport {
    let tr = mat.trace();
    let det = mat.det();
    let discriminant = tr * tr - 4.0 * det;
    let (lambda1, lambda2, contraction) = if discriminant >= 0.0 {
        let sq = discriminant.sqrt();
        let big = 0.5 * (tr + if tr >= 0.0 { sq } else { -sq });
        let small = if big == 0.0 { 0.0 } else { det / big };
        (
            big.max(small),
            big.min(small),
            big.abs() < 1.0 && small.abs() < 1.0,
        )
    } else {
        (0.5 * tr, 0.5 * tr, det < 1.0)
    };
    SpectralReport {
        matrix: mat,
        lambda1,
        lambda2,
        discriminant,
        contraction,
    }
}

/// Mean-value matrix: the derivative of the reduced map with each row
/// evaluated partway along the segment from the origin to `s`.
///
/// ```text
/// [[a(1−b·t₁·y)ⁿ   n·b(1−a·t₁·x)(1−b·t₁·y)ⁿ⁻¹]
///  [b(1−a·t₂·y)    a(1−b·t₂·x)              ]]
/// ```
///
/// For every state there exist `t₁, t₂ ∈ [0,1]` making this matrix carry `s`
/// exactly onto `F(s)` (row-wise scalar mean value theorem); `t₁ = t₂ = 0`
/// gives the origin linearization and `t₁ = t₂ = 1` the Jacobian at `s`.
pub fn mvt_matrix(sp: StarParams, s: State2, t1: f64, t2: f64) -> Matrix2 {
    debug_assert!((0.0..=1.0).contains(&t1) && (0.0..=1.0).contains(&t2));
    debug_assert!((0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.y));
    let (a, b) = (sp.a(), sp.b());
    let n = sp.n();
    Matrix2 {
        m11: a * unit_pow(1.0 - b * t1 * s.y, n),
        m12: n as f64 * b * (1.0 - a * t1 * s.x) * unit_pow(1.0 - b * t1 * s.y, n - 1),
        m21: b * (1.0 - a * t2 * s.y),
        m22: a * (1.0 - b * t2 * s.x),
    }
}

/// Derivative matrix of the reduced map at `s`.
pub fn jacobian(sp: StarParams, s: State2) -> Matrix2 {
    mvt_matrix(sp, s, 1.0, 1.0)
}

/// Arguments at which [`subcritical_contraction_check`] saw its largest
/// eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionWitness {
    pub x: f64,
    pub y: f64,
    pub t1: f64,
    pub t2: f64,
}

/// Maximizes the leading eigenvalue of [`mvt_matrix`] over a grid in
/// `(x, y, t₁, t₂) ∈ [0,1]⁴` under subcritical parameters.
///
/// `grid_resolution` r subdivides each axis into r intervals, so `(r+1)⁴`
/// corner points are evaluated; `r = 1` checks only the 16 corners. The
/// maximum is provably below 1 in this regime, so a value at or above 1
/// indicates a bug and panics.
pub fn subcritical_contraction_check(
    sp: StarParams,
    grid_resolution: u32,
) -> Result<(f64, ContractionWitness), Error> {
    if grid_resolution < 1 {
        return Err(Error::CountTooSmall {
            what: "grid_resolution",
            min: 1,
        });
    }
    if classify_regime(sp) != Regime::Subcritical {
        return Err(Error::NotSubcritical);
    }
    let r = grid_resolution as usize;
    let coord = |i: usize| i as f64 / r as f64;
    let mut best = f64::NEG_INFINITY;
    let mut witness = ContractionWitness {
        x: 0.0,
        y: 0.0,
        t1: 0.0,
        t2: 0.0,
    };
    for xi in 0..=r {
        for yi in 0..=r {
            let s = State2 {
                x: coord(xi),
                y: coord(yi),
            };
            for t1i in 0..=r {
                for t2i in 0..=r {
                    let (t1, t2) = (coord(t1i), coord(t2i));
                    let lambda1 = eig2(mvt_matrix(sp, s, t1, t2)).lambda1;
                    if lambda1 > best {
                        best = lambda1;
                        witness = ContractionWitness {
                            x: s.x,
                            y: s.y,
                            t1,
                            t2,
                        };
                    }
                }
            }
        }
    }
    assert!(
        best < 1.0,
        "subcritical contraction bound violated: lambda1 = {best}"
    );
    Ok((best, witness))
}

/// Hub coordinate of the interior fixed point for a two-spoke star, in
/// closed form.
///
/// The denominator `2ab(a² + b² − a − 2ab)` vanishes along a curve in the
/// parameter square; within 1e−14 of it the closed form is useless and the
/// caller is told to fall back to the numeric solver.
pub fn xf_closed_form_n2(p: Params) -> Result<f64, Error> {
    let (a, b) = (p.a(), p.b());
    if b <= threshold(a, 2) {
        return Err(Error::NotSupercritical);
    }
    let den = 2.0 * a * b * (a * a + b * b - a * (1.0 + 2.0 * b));
    if den.abs() < 1e-14 {
        return Err(Error::ClosedFormSingular { denominator: den });
    }
    let radicand = b.powi(4) + 4.0 * a * (1.0 - b) * (a - 1.0 - b).powi(2);
    let num = 2.0 * a.powi(3) + b.powi(3) - 2.0 * a * a * (2.0 + b)
        + a * (2.0 + 2.0 * b - 2.0 * b * b)
        - b * radicand.sqrt();
    Ok(num / den)
}

/// Jacobian at the two-spoke interior fixed point, via the closed-form hub
/// coordinate. Errors exactly as [`xf_closed_form_n2`].
pub fn fixed_point_matrix_n2(p: Params) -> Result<Matrix2, Error> {
    let (a, b) = (p.a(), p.b());
    let x_f = xf_closed_form_n2(p)?;
    let y_f = phi2_of_x(p, x_f);
    let c = 1.0 - b * y_f;
    Ok(Matrix2 {
        m11: a * c * c,
        m12: 2.0 * b * (1.0 - a * x_f) * c,
        m21: b * (1.0 - a * y_f),
        m22: a * (1.0 - b * x_f),
    })
}

/// A published explicit expression for the leading eigenvalue at the
/// two-spoke fixed point, evaluated verbatim:
///
/// ```text
/// ((1−b·y_f)² + (1−a·x_f))·a/2
///   + √( ((1−b·y_f)² − (1−a·x_f))·a² + 8b²(1−b·y_f)(1−a·x_f)(1−a·y_f) )/2
/// ```
///
/// The expression does not reproduce the eigenvalues of the fixed-point
/// Jacobian (see [`radical_crosscheck_n2`]), so treat it as a historical
/// artifact, not a reference value.
pub fn lambda1_radical_n2(p: Params) -> Result<f64, Error> {
    let (a, b) = (p.a(), p.b());
    let x_f = xf_closed_form_n2(p)?;
    let y_f = phi2_of_x(p, x_f);
    let c = 1.0 - b * y_f;
    let first = (c * c + (1.0 - a * x_f)) * a / 2.0;
    let radicand =
        (c * c - (1.0 - a * x_f)) * a * a + 8.0 * b * b * c * (1.0 - a * x_f) * (1.0 - a * y_f);
    Ok(first + radicand.sqrt() / 2.0)
}

/// Side-by-side comparison of [`lambda1_radical_n2`] with the eigenvalue of
/// [`fixed_point_matrix_n2`] computed by [`eig2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadicalCrosscheck {
    pub radical_lambda1: f64,
    pub eig_lambda1: f64,
    pub difference: f64,
    /// True when the two agree within 1e−10. Observed false across the
    /// parameter square; the report exists so the disagreement is visible
    /// rather than silently resolved.
    pub agrees: bool,
}

/// Evaluates both leading-eigenvalue routes at the two-spoke fixed point and
/// reports whether they agree.
pub fn radical_crosscheck_n2(p: Params) -> Result<RadicalCrosscheck, Error> {
    let radical_lambda1 = lambda1_radical_n2(p)?;
    let eig_lambda1 = eig2(fixed_point_matrix_n2(p)?).lambda1;
    let difference = (radical_lambda1 - eig_lambda1).abs();
    Ok(RadicalCrosscheck {
        radical_lambda1,
        eig_lambda1,
        difference,
        agrees: difference <= 1e-10,
    })
}

/// One point of an eigenvalue sweep along the line `b = (m − a)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub m: f64,
    pub a: f64,
    pub b: f64,
    pub x_f: f64,
    pub y_f: f64,
    pub lambda1: f64,
}

/// Sweeps the two-spoke leading eigenvalue along `b = (m − a)/√2`.
///
/// For `1 < m < 1 + √2` every point of the line with `a, b ∈ (0,1)` is
/// supercritical, so each sample carries an interior fixed point. `a` is
/// sampled at `steps` points strictly inside `(max(0, m−√2), 1)`; the fixed
/// point comes from the numeric solver (immune to the closed form's singular
/// curve) and λ₁ from the Jacobian there.
pub fn eigen_sweep_line(m: f64, steps: u32) -> Result<Vec<SweepRecord>, Error> {
    let sqrt2 = std::f64::consts::SQRT_2;
    if !(m > 1.0 && m < 1.0 + sqrt2) {
        return Err(Error::OutOfRange {
            name: "m",
            value: m,
            range: "(1, 1+sqrt(2))",
        });
    }
    if steps < 2 {
        return Err(Error::CountTooSmall {
            what: "steps",
            min: 2,
        });
    }
    let lo = (m - sqrt2).max(0.0);
    let mut records = Vec::with_capacity(steps as usize);
    for i in 0..steps {
        let a = lo + (i as f64 + 1.0) * (1.0 - lo) / (steps as f64 + 1.0);
        let b = (m - a) / sqrt2;
        let sp = StarParams::from_parts(a, b, 2)?;
        let fp = solve_fixed_points(sp)?
            .nontrivial
            .expect("every point of the line is supercritical");
        let lambda1 = eig2(jacobian(sp, fp)).lambda1;
        records.push(SweepRecord {
            m,
            a,
            b,
            x_f: fp.x,
            y_f: fp.y,
            lambda1,
        });
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
