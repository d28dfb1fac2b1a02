//! Reduced dynamics for multilevel stars.
//!
//! A multilevel star attaches `counts[0]` spokes to a hub, `counts[1]`
//! children to each of those, and so on. With within-level homogeneity
//! (which the full recursion approaches on its own) the system reduces to
//! one probability per level:
//!
//! ```text
//! s₁' = 1 − (1 − a·s₁)(1 − b·s₂)^{n₁}                      (hub)
//! s_k' = 1 − (1 − a·s_k)(1 − b·s_{k−1})(1 − b·s_{k+1})^{n_k} (interior)
//! s_ℓ' = 1 − (1 − a·s_ℓ)(1 − b·s_{ℓ−1})                     (leaves)
//! ```
//!
//! The interior form is a level-wise reading of the single-node update; it
//! is validated against full-graph iteration in tests rather than trusted.
//!
//! The map is monotone, so iterating from the all-ones state walks down to
//! the largest fixed point — the basis of both the solver and the empirical
//! threshold search. For two and three levels the persistence threshold is
//! `(1−a)/√(Σ counts)` (the adjacency spectral radius is exactly `√Σ` there);
//! for deeper stars that closed form is a conjecture, and the four-level
//! empirical threshold in our tests visibly deviates from it, matching the
//! true spectral radius instead.

use crate::error::Error;
use crate::params::{unit_pow, Params};

/// Infection/transmission parameters plus the per-level spoke counts
/// `[n₁, …, n_{ℓ−1}]` of an ℓ-level star.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelParams {
    params: Params,
    counts: Vec<u32>,
}

impl LevelParams {
    /// At least one level of spokes, each count positive.
    pub fn new(params: Params, counts: Vec<u32>) -> Result<Self, Error> {
        if counts.is_empty() {
            return Err(Error::CountTooSmall {
                what: "level counts",
                min: 1,
            });
        }
        if counts.contains(&0) {
            return Err(Error::CountTooSmall {
                what: "spokes per level",
                min: 1,
            });
        }
        Ok(LevelParams { params, counts })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Number of levels ℓ (hub level included).
    pub fn level_count(&self) -> usize {
        self.counts.len() + 1
    }
}

/// One probability per level, hub first.
#[derive(Debug, Clone, PartialEq)]
pub struct StateL {
    pub levels: Vec<f64>,
}

impl StateL {
    pub fn new(levels: Vec<f64>) -> Result<Self, Error> {
        for &v in &levels {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange {
                    name: "level probability",
                    value: v,
                    range: "[0, 1]",
                });
            }
        }
        Ok(StateL { levels })
    }

    pub fn all_ones(levels: usize) -> Self {
        StateL {
            levels: vec![1.0; levels],
        }
    }

    pub fn all_zeros(levels: usize) -> Self {
        StateL {
            levels: vec![0.0; levels],
        }
    }

    /// Sup-norm distance; lengths must agree.
    pub fn sup_dist(&self, other: &StateL) -> f64 {
        debug_assert_eq!(self.levels.len(), other.levels.len());
        self.levels
            .iter()
            .zip(&other.levels)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    pub fn sup_norm(&self) -> f64 {
        self.levels.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }
}

/// One application of the ℓ-level reduced map.
///
/// The dodge products multiply parent-factor first, then the child factor
/// `n_k` times, mirroring the neighbor order of the full-graph step so the
/// two stay bit-identical on homogeneous states.
pub fn apply_f_multilevel(lp: &LevelParams, s: &StateL) -> Result<StateL, Error> {
    let l = lp.level_count();
    if s.levels.len() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: s.levels.len(),
        });
    }
    let (a, b) = (lp.params.a(), lp.params.b());
    let mut out = Vec::with_capacity(l);
    for k in 0..l {
        let mut dodge = 1.0;
        if k > 0 {
            dodge *= 1.0 - b * s.levels[k - 1];
        }
        if k + 1 < l {
            let child_factor = 1.0 - b * s.levels[k + 1];
            for _ in 0..lp.counts[k] {
                dodge *= child_factor;
            }
        }
        out.push(1.0 - (1.0 - a * s.levels[k]) * dodge);
    }
    Ok(StateL { levels: out })
}

/// Iterates the reduced map until the step and residual drop below `tol`
/// (sup-norm) or the budget runs out; returns the last state, the number of
/// applications, and whether it converged.
pub fn iterate_multilevel(
    lp: &LevelParams,
    s0: &StateL,
    max_iters: usize,
    tol: f64,
) -> Result<(StateL, usize, bool), Error> {
    assert!(tol > 0.0, "tolerance must be positive");
    if s0.levels.len() != lp.level_count() {
        return Err(Error::DimensionMismatch {
            expected: lp.level_count(),
            got: s0.levels.len(),
        });
    }
    let mut cur = s0.clone();
    let mut used = 0;
    for _ in 0..max_iters {
        let next = apply_f_multilevel(lp, &cur)?;
        let step = cur.sup_dist(&next);
        cur = next;
        used += 1;
        if step < tol && cur.sup_dist(&apply_f_multilevel(lp, &cur)?) < tol {
            return Ok((cur, used, true));
        }
    }
    Ok((cur, used, false))
}

/// Persistence threshold of a three-level star: `(1−a)/√(n₁+n₂)`.
pub fn threshold_3level(a: f64, n1: u32, n2: u32) -> f64 {
    assert!(n1 >= 1 && n2 >= 1, "both spoke counts must be positive");
    threshold_conjectured(a, &[n1, n2])
}

/// The conjectured ℓ-level threshold `(1−a)/√(Σ counts)`.
///
/// Exact for two and three levels. For deeper stars it is only a conjecture,
/// and empirically wrong: the adjacency spectral radius of a four-level star
/// is strictly below `√Σ`, so persistence sets in at a larger `b` than this
/// formula predicts (see [`empirical_threshold`]).
pub fn threshold_conjectured(a: f64, counts: &[u32]) -> f64 {
    assert!(a > 0.0 && a < 1.0, "a = {a} outside (0, 1)");
    assert!(
        !counts.is_empty() && !counts.contains(&0),
        "counts must be nonempty and positive"
    );
    let total: u32 = counts.iter().sum();
    (1.0 - a) / (total as f64).sqrt()
}

/// Partial-fixed-point surfaces of the three-level system, evaluated at a
/// point `(x, y, z)` (hub, middle, leaf).
///
/// * `phi1` — hub value stationary given middle level `y`.
/// * `phi2_implicit_residual` — the published middle-level relation keeps
///   `y` on both sides, so only its residual is exposed:
///   `y − (1−q)/(1−a·y·q)` with `q = (1−b·x)(1−b·z)^{n₂}`. It vanishes at the
///   origin but **not** at the interior fixed point; use
///   [`reduced_curve_x_of_y`] for a relation that does.
/// * `phi3` — leaf value stationary given middle level `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelSurfaces {
    pub phi1: f64,
    pub phi2_implicit_residual: f64,
    pub phi3: f64,
}

/// Evaluates the three partial-fixed-point surfaces; see
/// [`ThreeLevelSurfaces`]. Requires a three-level parameter set and a
/// three-entry point.
pub fn surfaces_3level(lp: &LevelParams, point: &StateL) -> Result<ThreeLevelSurfaces, Error> {
    if lp.level_count() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: lp.level_count(),
        });
    }
    if point.levels.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: point.levels.len(),
        });
    }
    let (a, b) = (lp.params.a(), lp.params.b());
    let (n1, n2) = (lp.counts[0], lp.counts[1]);
    let (x, y, z) = (point.levels[0], point.levels[1], point.levels[2]);
    let u = unit_pow(1.0 - b * y, n1);
    let q = (1.0 - b * x) * unit_pow(1.0 - b * z, n2);
    Ok(ThreeLevelSurfaces {
        phi1: (1.0 - u) / (1.0 - a * u),
        phi2_implicit_residual: y - (1.0 - q) / (1.0 - a * y * q),
        phi3: b * y / (1.0 - a + a * b * y),
    })
}

/// The explicit hub-versus-middle curve of the three-level system:
///
/// ```text
/// x(y) = (y − 1) / ( b(1 − a·y)(1 − b²y/(1−a+a·b·y))^{n₂} ) + 1/b
/// ```
///
/// Passes through the origin and the interior fixed point; values outside
/// the unit square simply mean the curve has exited it at that `y`.
pub fn reduced_curve_x_of_y(lp: &LevelParams, y: f64) -> Result<f64, Error> {
    if lp.level_count() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: lp.level_count(),
        });
    }
    debug_assert!((0.0..=1.0).contains(&y));
    let (a, b) = (lp.params.a(), lp.params.b());
    let n2 = lp.counts[1];
    let inner = 1.0 - b * b * y / (1.0 - a + a * b * y);
    Ok((y - 1.0) / (b * (1.0 - a * y) * unit_pow(inner, n2)) + 1.0 / b)
}

/// Origin slopes of the three-level curves: `φ₁'(0) = b·n₁/(1−a)` for the
/// hub surface and `((1−a)² − b²·n₂)/(b(1−a))` for [`reduced_curve_x_of_y`].
pub fn three_level_origin_slopes(lp: &LevelParams) -> Result<(f64, f64), Error> {
    if lp.level_count() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: lp.level_count(),
        });
    }
    let (a, b) = (lp.params.a(), lp.params.b());
    let (n1, n2) = (lp.counts[0] as f64, lp.counts[1] as f64);
    Ok((
        b * n1 / (1.0 - a),
        ((1.0 - a) * (1.0 - a) - b * b * n2) / (b * (1.0 - a)),
    ))
}

/// Detection floor for calling a converged state "nontrivial": near the
/// threshold the interior fixed point shrinks to zero, so anything below
/// this sup-norm is treated as extinction.
pub const NONTRIVIAL_DETECTION_FLOOR: f64 = 1e-6;

/// Largest fixed point of the ℓ-level map, found by monotone iteration from
/// the all-ones state (defaults: tolerance 1e−12, detection floor
/// [`NONTRIVIAL_DETECTION_FLOOR`], cap 10⁶). `None` means the iteration fell
/// to extinction, i.e. no interior fixed point.
pub fn solve_fixed_point_multilevel(lp: &LevelParams) -> Result<Option<StateL>, Error> {
    solve_fixed_point_multilevel_with(lp, 1e-12, NONTRIVIAL_DETECTION_FLOOR, 1_000_000)
}

/// [`solve_fixed_point_multilevel`] with explicit tolerance, detection
/// floor, and iteration cap. The map is monotone and all-ones is the top
/// state, so the iteration is componentwise non-increasing and its limit is
/// the largest fixed point; no multivariate root-finding is involved.
pub fn solve_fixed_point_multilevel_with(
    lp: &LevelParams,
    tol: f64,
    detection_floor: f64,
    max_iters: usize,
) -> Result<Option<StateL>, Error> {
    let mut cur = StateL::all_ones(lp.level_count());
    for _ in 0..max_iters {
        let next = apply_f_multilevel(lp, &cur)?;
        // the descent never undershoots the largest fixed point, so dipping
        // below the floor already proves that fixed point is sub-floor
        if next.sup_norm() < detection_floor {
            return Ok(None);
        }
        let step = next.sup_dist(&cur);
        cur = next;
        if step < tol {
            return Ok(Some(cur));
        }
    }
    Err(Error::SolverFailed {
        iterations: max_iters,
    })
}

/// Total version of the persistence question for bisection probes: does the
/// monotone descent from all-ones settle at or above the detection floor?
///
/// Unlike [`solve_fixed_point_multilevel_with`] this never fails: if the
/// budget runs out mid-descent (which happens arbitrarily close to the
/// threshold, where the contraction rate degenerates to 1), the current
/// iterate decides. The sequence is componentwise non-increasing and bounded
/// below by the largest fixed point, so the misclassification band this
/// introduces is a thin shell around the exact threshold — ~10⁻⁵ wide at the
/// default budget, well inside any reasonable bisection width.
fn persists_above_floor(
    lp: &LevelParams,
    tol: f64,
    detection_floor: f64,
    max_iters: usize,
) -> Result<bool, Error> {
    let mut cur = StateL::all_ones(lp.level_count());
    for _ in 0..max_iters {
        let next = apply_f_multilevel(lp, &cur)?;
        if next.sup_norm() < detection_floor {
            return Ok(false);
        }
        let step = next.sup_dist(&cur);
        cur = next;
        if step < tol {
            return Ok(true);
        }
    }
    // budget exhausted with every iterate still above the floor
    Ok(true)
}

/// Empirical persistence threshold in `b` for fixed `a` and level counts:
/// bisects the predicate "an interior fixed point exists" over
/// `b ∈ [10⁻⁶, 1−10⁻⁶]` down to width 1e−4.
pub fn empirical_threshold(a: f64, counts: &[u32]) -> Result<f64, Error> {
    empirical_threshold_with(
        a,
        counts,
        1e-4,
        1e-12,
        NONTRIVIAL_DETECTION_FLOOR,
        1_000_000,
    )
}

/// [`empirical_threshold`] with explicit bisection width and solver
/// settings. Errors when the predicate is constant across the probed range
/// (threshold outside `(10⁻⁶, 1−10⁻⁶)`).
pub fn empirical_threshold_with(
    a: f64,
    counts: &[u32],
    width: f64,
    tol: f64,
    detection_floor: f64,
    max_iters: usize,
) -> Result<f64, Error> {
    assert!(width > 0.0, "bisection width must be positive");
    let probe = |b: f64| -> Result<bool, Error> {
        let lp = LevelParams::new(Params::new(a, b)?, counts.to_vec())?;
        persists_above_floor(&lp, tol, detection_floor, max_iters)
    };
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    if probe(lo)? {
        return Err(Error::DegenerateDomain {
            what: "interior fixed point persists at the bottom of the probe range (threshold below 1e-6)",
        });
    }
    if !probe(hi)? {
        return Err(Error::DegenerateDomain {
            what: "no interior fixed point anywhere in the probe range (threshold above 1 - 1e-6)",
        });
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_multilevel_star, step_full, FullState};
    use crate::params::{StarParams, State2};
    use crate::reduced::{apply_f, solve_fixed_points};
    use proptest::prelude::*;

    fn lp(a: f64, b: f64, counts: &[u32]) -> LevelParams {
        LevelParams::new(Params::new(a, b).unwrap(), counts.to_vec()).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert!(LevelParams::new(Params::new(0.5, 0.5).unwrap(), vec![]).is_err());
        assert!(LevelParams::new(Params::new(0.5, 0.5).unwrap(), vec![2, 0]).is_err());
        assert!(StateL::new(vec![0.5, 1.2]).is_err());
        assert_eq!(lp(0.5, 0.5, &[2, 3]).level_count(), 3);
    }

    #[test]
    fn zero_is_fixed() {
        let lpv = lp(0.5, 0.6, &[2, 2]);
        let z = StateL::all_zeros(3);
        assert_eq!(apply_f_multilevel(&lpv, &z).unwrap(), z);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let lpv = lp(0.5, 0.6, &[2, 2]);
        assert!(matches!(
            apply_f_multilevel(&lpv, &StateL::all_ones(4)),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 4
            })
        ));
    }

    #[test]
    fn two_levels_specialize_to_the_planar_map() {
        let lpv = lp(0.4, 0.7, &[5]);
        let sp = StarParams::from_parts(0.4, 0.7, 5).unwrap();
        let mut s = StateL::new(vec![0.3, 0.8]).unwrap();
        let mut s2 = State2 { x: 0.3, y: 0.8 };
        for _ in 0..50 {
            s = apply_f_multilevel(&lpv, &s).unwrap();
            s2 = apply_f(sp, s2);
            // same arithmetic, same order: bit-identical
            assert_eq!((s.levels[0], s.levels[1]), (s2.x, s2.y));
        }
    }

    #[test]
    fn reduced_map_matches_full_graph_per_level() {
        for counts in [vec![2u32, 2], vec![3, 2], vec![2, 3, 2]] {
            let lpv = lp(0.45, 0.55, &counts);
            let topo = build_multilevel_star(&counts).unwrap();
            let l = counts.len() + 1;
            let level_values: Vec<f64> = (0..l).map(|k| 0.9 - 0.2 * k as f64).collect();
            let mut reduced = StateL::new(level_values.clone()).unwrap();

            // assign each node its level's value
            let depths = crate::graph::node_depths(&topo);
            let mut full =
                FullState::new(depths.iter().map(|&d| level_values[d]).collect::<Vec<_>>())
                    .unwrap();

            for _ in 0..100 {
                reduced = apply_f_multilevel(&lpv, &reduced).unwrap();
                full = step_full(&topo, lpv.params(), &full).unwrap();
                for (node, &d) in depths.iter().enumerate() {
                    assert_eq!(
                        full.as_slice()[node],
                        reduced.levels[d],
                        "level {d} diverged"
                    );
                }
            }
        }
    }

    #[test]
    fn three_level_threshold_formula() {
        assert_eq!(threshold_3level(0.5, 2, 2), 0.25);
        assert!((threshold_conjectured(0.5, &[4]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn surfaces_vanish_at_origin() {
        let lpv = lp(0.5, 0.6, &[2, 2]);
        let s = surfaces_3level(&lpv, &StateL::all_zeros(3)).unwrap();
        assert_eq!((s.phi1, s.phi2_implicit_residual, s.phi3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn surfaces_require_three_levels() {
        let lpv = lp(0.5, 0.6, &[2]);
        assert!(surfaces_3level(&lpv, &StateL::all_zeros(2)).is_err());
    }

    #[test]
    fn hub_and_leaf_surfaces_are_stationary_loci() {
        let lpv = lp(0.5, 0.6, &[2, 2]);
        let (a, b) = (0.5, 0.6);
        for k in 0..=10 {
            let y = k as f64 / 10.0;
            let s = surfaces_3level(&lpv, &StateL::new(vec![0.0, y, 0.0]).unwrap()).unwrap();
            // hub stationary: x = 1 − (1−a·x)(1−b·y)²
            let g1 = 1.0 - (1.0 - a * s.phi1) * (1.0 - b * y).powi(2) - s.phi1;
            assert!(g1.abs() <= 1e-12);
            // leaf stationary: z = 1 − (1−a·z)(1−b·y)
            let g3 = 1.0 - (1.0 - a * s.phi3) * (1.0 - b * y) - s.phi3;
            assert!(g3.abs() <= 1e-12);
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)] // frozen references keep every derived digit
    fn fixed_point_matches_high_precision_reference() {
        // 60-digit reference for a=0.5, b=0.6, counts [2,2]
        let fp = solve_fixed_point_multilevel(&lp(0.5, 0.6, &[2, 2]))
            .unwrap()
            .unwrap();
        let expect = [
            0.88727137296150525,
            0.91645083346730681,
            0.70956960604368563,
        ];
        for (got, want) in fp.levels.iter().zip(expect) {
            assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn explicit_curve_passes_through_the_fixed_point() {
        let lpv = lp(0.5, 0.6, &[2, 2]);
        let fp = solve_fixed_point_multilevel(&lpv).unwrap().unwrap();
        let x_curve = reduced_curve_x_of_y(&lpv, fp.levels[1]).unwrap();
        assert!((x_curve - fp.levels[0]).abs() <= 1e-9);
        // the leaf surface reproduces the leaf coordinate too
        let s = surfaces_3level(&lpv, &fp).unwrap();
        assert!((s.phi3 - fp.levels[2]).abs() <= 1e-12);
        // while the published implicit middle relation does not close there
        assert!(s.phi2_implicit_residual.abs() > 1e-3);
    }

    #[test]
    fn origin_slopes_match_finite_differences() {
        let lpv = lp(0.5, 0.6, &[2, 3]);
        let (slope1, slope2) = three_level_origin_slopes(&lpv).unwrap();
        assert!((slope1 - 0.6 * 2.0 / 0.5).abs() < 1e-14);

        let h = 1e-7;
        let sp = StarParams::from_parts(0.5, 0.6, 2).unwrap();
        let fd1 = crate::reduced::phi1(sp, h) / h;
        assert!((slope1 - fd1).abs() < 1e-5);
        let fd2 =
            (reduced_curve_x_of_y(&lpv, h).unwrap() - reduced_curve_x_of_y(&lpv, 0.0).unwrap()) / h;
        assert!((slope2 - fd2).abs() < 1e-5);
    }

    #[test]
    fn solver_two_level_agrees_with_planar_solver() {
        let fp_ml = solve_fixed_point_multilevel(&lp(0.5, 0.5, &[4]))
            .unwrap()
            .unwrap();
        let fp_2d = solve_fixed_points(StarParams::from_parts(0.5, 0.5, 4).unwrap())
            .unwrap()
            .nontrivial
            .unwrap();
        assert!((fp_ml.levels[0] - fp_2d.x).abs() <= 1e-10);
        assert!((fp_ml.levels[1] - fp_2d.y).abs() <= 1e-10);
    }

    #[test]
    fn solver_reports_absence_below_threshold() {
        assert!(solve_fixed_point_multilevel(&lp(0.5, 0.2, &[2, 2]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn iteration_from_the_top_is_monotone() {
        let lpv = lp(0.5, 0.6, &[2, 2]);
        let mut cur = StateL::all_ones(3);
        for _ in 0..200 {
            let next = apply_f_multilevel(&lpv, &cur).unwrap();
            for (n, c) in next.levels.iter().zip(&cur.levels) {
                assert!(n <= c, "monotone descent broken");
            }
            cur = next;
        }
    }

    #[test]
    fn empirical_threshold_matches_proven_cases() {
        // two levels, four spokes: threshold 1/4
        let t2 = empirical_threshold(0.5, &[4]).unwrap();
        assert!((t2 - 0.25).abs() <= 1e-3);
        // three levels [2,2]: same total, same threshold
        let t3 = empirical_threshold(0.5, &[2, 2]).unwrap();
        assert!((t3 - threshold_3level(0.5, 2, 2)).abs() <= 1e-3);
    }

    #[test]
    fn four_level_threshold_departs_from_the_conjectured_formula() {
        // evidence, frozen: the observed threshold sits at (1−a)/λ_max of the
        // actual adjacency (λ_max ≈ 2.28825 for [2,2,2]), well above the
        // conjectured (1−a)/√6 ≈ 0.20412
        let t4 = empirical_threshold(0.5, &[2, 2, 2]).unwrap();
        let spectral = 0.5 / 2.288_245_611_270_738;
        assert!((t4 - spectral).abs() <= 1e-3, "observed {t4}");
        assert!(
            (t4 - threshold_conjectured(0.5, &[2, 2, 2])).abs() > 1e-2,
            "conjectured formula unexpectedly matches at four levels: {t4}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn map_preserves_range_and_order(
            a in 0.01f64..0.99,
            b in 0.01f64..0.99,
            n1 in 1u32..5,
            n2 in 1u32..5,
            v in proptest::collection::vec(0.0f64..1.0, 3),
            w in proptest::collection::vec(0.0f64..1.0, 3),
        ) {
            let lpv = lp(a, b, &[n1, n2]);
            let s = StateL::new(v.clone()).unwrap();
            let t = StateL::new(
                v.iter().zip(&w).map(|(x, d)| x + d * (1.0 - x)).collect::<Vec<_>>(),
            ).unwrap();
            let fs = apply_f_multilevel(&lpv, &s).unwrap();
            let ft = apply_f_multilevel(&lpv, &t).unwrap();
            for (x, y) in fs.levels.iter().zip(&ft.levels) {
                prop_assert!((0.0..=1.0).contains(x));
                prop_assert!(x <= y);
            }
        }
    }
}
