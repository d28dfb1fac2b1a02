//! Trajectories of the reduced map and the geometry that steers them.
//!
//! The two partial-fixed-point curves cut the unit square into four open
//! regions. Points below both curves (Region I) step strictly up in both
//! coordinates, points above both (Region III) step strictly down, and both
//! regions map into themselves. That makes corner trajectories of a rectangle
//! with one corner in I and one in III a certificate: every interior start is
//! sandwiched between them forever, so when the corners meet at the interior
//! fixed point the whole rectangle has converged.
//!
//! The mixed regions II and IV carry no such monotonicity. Empirically their
//! points exchange places under the map; [`flip_classifier`] measures that
//! behavior on a deterministic sample.

use crate::error::Error;
use crate::params::{StarParams, State2};
use crate::reduced::{apply_f, classify_regime, phi1, phi2_of_x, solve_fixed_points, Regime};

/// Absolute distance to a curve below which a point is labeled on-curve
/// rather than assigned to an open region.
pub const REGION_BOUNDARY_TOL: f64 = 1e-12;

/// Iteration cap used by operations that do not take an explicit cap.
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;

/// Where a point sits relative to the two partial-fixed-point curves.
///
/// * `I` — below both curves; iterates increase componentwise.
/// * `II` — right of the hub curve, below the spoke curve.
/// * `III` — above both curves; iterates decrease componentwise.
/// * `IV` — left of the hub curve, above the spoke curve.
///
/// Points within [`REGION_BOUNDARY_TOL`] of a curve are reported as
/// `OnPhi1`/`OnPhi2` (`OnPhi1` wins when both apply), since the monotonicity
/// guarantees hold only strictly inside the open regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    I,
    II,
    III,
    IV,
    OnPhi1,
    OnPhi2,
    Origin,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::OnPhi1 => "OnPhi1",
            Region::OnPhi2 => "OnPhi2",
            Region::Origin => "Origin",
        })
    }
}

/// Identity of the limit a trajectory settled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// Extinction: the trajectory reached the all-zero state.
    Trivial,
    /// The interior (endemic) fixed point.
    Nontrivial,
    /// No certified limit within the iteration budget.
    Unresolved,
}

/// A finite orbit of the reduced map; consecutive points are related by one
/// map application, `points[0]` being the start.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<State2>,
    /// Final iterate when it was certified close to a known fixed point.
    /// Present exactly when `limit_kind != Unresolved`.
    pub converged_to: Option<State2>,
    /// Number of map applications taken (`points.len() − 1`).
    pub iterations_used: usize,
    pub limit_kind: LimitKind,
}

/// Axis-aligned rectangle given by its lower-left and upper-right corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub lower: State2,
    pub upper: State2,
}

impl Envelope {
    /// Builds the rectangle, insisting on componentwise order.
    pub fn new(lower: State2, upper: State2) -> Result<Self, Error> {
        if !(lower.x <= upper.x && lower.y <= upper.y) {
            return Err(Error::BadEnvelopeCorner {
                which: "upper",
                why: "lies below the lower corner in some coordinate",
            });
        }
        Ok(Envelope { lower, upper })
    }
}

/// Classifies `s` against the two curves. Exhaustive and exclusive over the
/// unit square; see [`Region`] for the tie-break near the curves.
pub fn classify_region(sp: StarParams, s: State2) -> Region {
    debug_assert!((0.0..=1.0).contains(&s.x) && (0.0..=1.0).contains(&s.y));
    if s.x == 0.0 && s.y == 0.0 {
        return Region::Origin;
    }
    let hub_curve = phi1(sp, s.y);
    let spoke_curve = phi2_of_x(sp.params(), s.x);
    if (s.x - hub_curve).abs() <= REGION_BOUNDARY_TOL {
        return Region::OnPhi1;
    }
    if (s.y - spoke_curve).abs() <= REGION_BOUNDARY_TOL {
        return Region::OnPhi2;
    }
    match (s.x < hub_curve, s.y < spoke_curve) {
        (true, true) => Region::I,
        (false, false) => Region::III,
        (false, true) => Region::II,
        (true, false) => Region::IV,
    }
}

/// Iterates the reduced map from `s0` until both the step size and the
/// fixed-point residual drop below `tol` (sup-norm), or `max_iters` is spent.
///
/// The limit is labeled by proximity: within `10·tol` of the origin it is
/// `Trivial`, within `10·tol` of the solver's interior fixed point it is
/// `Nontrivial`; anything else (including exhausting the budget) is
/// `Unresolved` with no `converged_to`.
pub fn iterate(sp: StarParams, s0: State2, max_iters: usize, tol: f64) -> Trajectory {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut points = vec![s0];
    let mut cur = s0;
    let mut settled = None;
    for _ in 0..max_iters {
        let next = apply_f(sp, cur);
        let step = cur.sup_dist(next);
        points.push(next);
        cur = next;
        if step < tol && cur.sup_dist(apply_f(sp, cur)) < tol {
            settled = Some(cur);
            break;
        }
    }

    let (converged_to, limit_kind) = match settled {
        None => (None, LimitKind::Unresolved),
        Some(q) => {
            let near_origin = q.sup_dist(State2::ORIGIN) < 10.0 * tol;
            let interior = solve_fixed_points(sp)
                .ok()
                .and_then(|r| r.nontrivial)
                .filter(|fp| q.sup_dist(*fp) < 10.0 * tol);
            if near_origin {
                (Some(q), LimitKind::Trivial)
            } else if interior.is_some() {
                (Some(q), LimitKind::Nontrivial)
            } else {
                (None, LimitKind::Unresolved)
            }
        }
    };
    let iterations_used = points.len() - 1;
    Trajectory {
        points,
        converged_to,
        iterations_used,
        limit_kind,
    }
}

/// How one map application moved a point, componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMonotonicity {
    IncreasedBoth,
    DecreasedBoth,
    Mixed,
}

/// Compares `F(s)` with `s` for a point strictly inside Region I or III.
///
/// Inside those regions the outcome is forced (up-up, respectively
/// down-down); other inputs are rejected because no direction is guaranteed
/// for them.
pub fn region_step_monotonicity_check(
    sp: StarParams,
    s: State2,
) -> Result<StepMonotonicity, Error> {
    let region = classify_region(sp, s);
    if region != Region::I && region != Region::III {
        return Err(Error::NotInMonotoneRegion);
    }
    let f = apply_f(sp, s);
    Ok(if f.x > s.x && f.y > s.y {
        StepMonotonicity::IncreasedBoth
    } else if f.x < s.x && f.y < s.y {
        StepMonotonicity::DecreasedBoth
    } else {
        StepMonotonicity::Mixed
    })
}

/// Iterates both corners of a rectangle and certifies convergence for its
/// whole interior.
///
/// Preconditions: supercritical parameters; the lower corner strictly inside
/// Region I with both coordinates at least 1e−6 (the extinction point repels,
/// but only from strictly positive states); the upper corner strictly inside
/// Region III. A degenerate rectangle whose corners already sit within `tol`
/// of the interior fixed point is accepted as-is.
///
/// Returns the two corner trajectories and `certified`, true when both
/// corners settled on the interior fixed point — the sandwich property then
/// extends the conclusion to every start inside the rectangle.
pub fn envelope_iterate(
    sp: StarParams,
    env: Envelope,
    max_iters: usize,
    tol: f64,
) -> Result<(Trajectory, Trajectory, bool), Error> {
    let fp = solve_fixed_points(sp)?
        .nontrivial
        .ok_or(Error::NotSupercritical)?;

    if env.lower.sup_dist(fp) > tol {
        if env.lower.x < 1e-6 || env.lower.y < 1e-6 {
            return Err(Error::BadEnvelopeCorner {
                which: "lower",
                why: "coordinates must be at least 1e-6; the extinction state repels only strictly positive starts",
            });
        }
        if classify_region(sp, env.lower) != Region::I {
            return Err(Error::BadEnvelopeCorner {
                which: "lower",
                why: "not strictly inside the increasing region",
            });
        }
    }
    if env.upper.sup_dist(fp) > tol && classify_region(sp, env.upper) != Region::III {
        return Err(Error::BadEnvelopeCorner {
            which: "upper",
            why: "not strictly inside the decreasing region",
        });
    }

    let lower = iterate(sp, env.lower, max_iters, tol);
    let upper = iterate(sp, env.upper, max_iters, tol);
    let certified =
        lower.limit_kind == LimitKind::Nontrivial && upper.limit_kind == LimitKind::Nontrivial;
    Ok((lower, upper, certified))
}

/// Number of map applications until the orbit of `s` first comes within
/// `tol` (sup-norm) of the interior fixed point.
///
/// The count for any interior point is bounded by the larger of the two
/// corner counts of an enclosing rectangle; that bound is checked as a test
/// property, not assumed here. Capped at [`DEFAULT_MAX_ITERS`].
pub fn convergence_time(sp: StarParams, s: State2, tol: f64) -> Result<usize, Error> {
    assert!(tol > 0.0, "tolerance must be positive");
    let fp = solve_fixed_points(sp)?
        .nontrivial
        .ok_or(Error::NotSupercritical)?;
    if s.x == 0.0 && s.y == 0.0 {
        return Err(Error::DegenerateDomain {
            what: "starting state (0,0) never leaves the extinction point",
        });
    }
    let mut cur = s;
    for k in 0..=DEFAULT_MAX_ITERS {
        if cur.sup_dist(fp) <= tol {
            return Ok(k);
        }
        cur = apply_f(sp, cur);
    }
    Err(Error::SolverFailed {
        iterations: DEFAULT_MAX_ITERS,
    })
}

/// Verdict of [`flip_classifier`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipLabel {
    /// Every sampled II point left II, every IV point left IV, and traffic in
    /// both directions between II and IV was observed.
    Flipping,
    /// No sampled point crossed between II and IV in either direction.
    NonFlipping,
    /// Neither pattern held cleanly on this sample.
    Inconsistent,
}

impl std::fmt::Display for FlipLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FlipLabel::Flipping => "Flipping",
            FlipLabel::NonFlipping => "NonFlipping",
            FlipLabel::Inconsistent => "Inconsistent",
        })
    }
}

/// Destination counts for the images of one region's sample points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RegionTally {
    pub to_i: usize,
    pub to_ii: usize,
    pub to_iii: usize,
    pub to_iv: usize,
    /// Images on a curve or at the origin; excluded from the label logic.
    pub to_boundary: usize,
}

impl RegionTally {
    fn record(&mut self, r: Region) {
        match r {
            Region::I => self.to_i += 1,
            Region::II => self.to_ii += 1,
            Region::III => self.to_iii += 1,
            Region::IV => self.to_iv += 1,
            Region::OnPhi1 | Region::OnPhi2 | Region::Origin => self.to_boundary += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.to_i + self.to_ii + self.to_iii + self.to_iv + self.to_boundary
    }
}

/// A sampled point whose image stayed in its own mixed region — the kind of
/// transition that rules out the Flipping label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipOffender {
    pub point: State2,
    pub image: State2,
    /// The region (II or IV) that both the point and its image occupy.
    pub region: Region,
}

/// Full evidence gathered by [`flip_classifier`]: the label plus the raw
/// transition tallies, so either reading of "iterates outside the region"
/// can be applied downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipReport {
    pub label: FlipLabel,
    pub from_region_ii: RegionTally,
    pub from_region_iv: RegionTally,
    /// Stay-in-place transitions, capped at 16 entries for inspection.
    pub offenders: Vec<FlipOffender>,
}

/// Plastic-constant rotation: the 2-D analogue of golden-ratio sampling.
const PLASTIC: f64 = 1.324_717_957_244_746;
/// Scan budget for finding in-region sample points.
const SAMPLE_ATTEMPT_CAP: u64 = 10_000_000;
const OFFENDER_CAP: usize = 16;

/// k-th point of the low-discrepancy sequence used for sampling. Fixed phase
/// 0.5 so every run sees the same points.
fn quasi_random_point(k: u64) -> (f64, f64) {
    let a1 = 1.0 / PLASTIC;
    let a2 = 1.0 / (PLASTIC * PLASTIC);
    ((0.5 + a1 * k as f64).fract(), (0.5 + a2 * k as f64).fract())
}

/// Samples `samples` quasi-random points in each of Regions II and IV, maps
/// each once, and labels the observed transition pattern.
///
/// The sample sequence is deterministic, so the label is reproducible.
/// Points—and images—landing on a curve are tallied as boundary and take no
/// part in the label. Errors when a region is too thin to yield the requested
/// sample count within the scan budget.
pub fn flip_classifier(sp: StarParams, samples: usize) -> Result<FlipReport, Error> {
    if samples == 0 {
        return Err(Error::CountTooSmall {
            what: "samples",
            min: 1,
        });
    }
    if classify_regime(sp) != Regime::Supercritical {
        return Err(Error::NotSupercritical);
    }

    let mut ii_points = Vec::with_capacity(samples);
    let mut iv_points = Vec::with_capacity(samples);
    for k in 0..SAMPLE_ATTEMPT_CAP {
        let (x, y) = quasi_random_point(k);
        let s = State2 { x, y };
        match classify_region(sp, s) {
            Region::II if ii_points.len() < samples => ii_points.push(s),
            Region::IV if iv_points.len() < samples => iv_points.push(s),
            _ => {}
        }
        if ii_points.len() == samples && iv_points.len() == samples {
            break;
        }
    }
    for (region, found) in [("II", ii_points.len()), ("IV", iv_points.len())] {
        if found < samples {
            return Err(Error::TooFewSamples {
                region,
                requested: samples,
                found,
            });
        }
    }

    let mut from_region_ii = RegionTally::default();
    let mut from_region_iv = RegionTally::default();
    let mut offenders = Vec::new();
    for (home, points, tally) in [
        (Region::II, &ii_points, &mut from_region_ii),
        (Region::IV, &iv_points, &mut from_region_iv),
    ] {
        for &point in points {
            let image = apply_f(sp, point);
            let dest = classify_region(sp, image);
            tally.record(dest);
            if dest == home && offenders.len() < OFFENDER_CAP {
                offenders.push(FlipOffender {
                    point,
                    image,
                    region: home,
                });
            }
        }
    }

    let label = if from_region_ii.to_ii == 0
        && from_region_iv.to_iv == 0
        && from_region_ii.to_iv > 0
        && from_region_iv.to_ii > 0
    {
        FlipLabel::Flipping
    } else if from_region_ii.to_iv == 0 && from_region_iv.to_ii == 0 {
        FlipLabel::NonFlipping
    } else {
        FlipLabel::Inconsistent
    };

    Ok(FlipReport {
        label,
        from_region_ii,
        from_region_iv,
        offenders,
    })
}

// ---------------------------------------------------------------------------
