//! Cross-checks between the full per-node recursion and the reduced maps.
//!
//! The reductions in this crate are claimed to be *exact*: starting the full
//! graph from a level-homogeneous state and stepping every node individually
//! must reproduce the reduced iterates. Because both sides fold their
//! neighbor products in the same order, the agreement is bit-level, not just
//! within tolerance — the discrepancy functions below should return exactly
//! `0.0` and are wired into tests and the CLI as standing evidence.
//!
//! The second family of checks covers *heterogeneous* spokes on a plain
//! star: the spoke spread (max − min) contracts each step by exactly
//! `a·(1 − b·p₀)` where `p₀` is the pre-step hub value, so unequal spokes
//! homogenize geometrically and the reduced description becomes exact in the
//! limit.

use crate::error::Error;
use crate::graph::{
    build_multilevel_star, build_star, node_depths, spoke_spread, spread_decay_factor, step_full,
    FullState,
};
use crate::multilevel::{apply_f_multilevel, LevelParams, StateL};
use crate::params::{StarParams, State2};
use crate::reduced::apply_f;

/// Worst per-node gap between the full star recursion started from the
/// homogeneous state `(x0, y0, …, y0)` and the reduced planar map, over
/// `steps` synchronous steps.
pub fn reduction_discrepancy_star(sp: StarParams, s0: State2, steps: usize) -> Result<f64, Error> {
    reduction_discrepancy_star_with(sp, s0, steps, apply_f)
}

/// [`reduction_discrepancy_star`] with a caller-supplied reduced step.
///
/// Lets tests and the CLI run a *negative control*: inject a slightly
/// corrupted reduced map and confirm the discrepancy detector actually
/// reports a nonzero gap, so a zero from the real map is meaningful.
pub fn reduction_discrepancy_star_with(
    sp: StarParams,
    s0: State2,
    steps: usize,
    reduced_step: impl Fn(StarParams, State2) -> State2,
) -> Result<f64, Error> {
    let topology = build_star(sp.n())?;
    let mut nodes = vec![s0.y; sp.n() as usize + 1];
    nodes[0] = s0.x;
    let mut full = FullState::new(nodes)?;
    let mut reduced = s0;
    let mut worst = 0.0f64;
    for _ in 0..steps {
        full = step_full(&topology, sp.params(), &full)?;
        reduced = reduced_step(sp, reduced);
        let p = full.as_slice();
        worst = worst.max((p[0] - reduced.x).abs());
        for &spoke in &p[1..] {
            worst = worst.max((spoke - reduced.y).abs());
        }
    }
    Ok(worst)
}

/// Worst per-node gap between the full multilevel recursion started from a
/// level-homogeneous state and the per-level reduced map, over `steps` steps.
pub fn reduction_discrepancy_multilevel(
    lp: &LevelParams,
    s0: &StateL,
    steps: usize,
) -> Result<f64, Error> {
    if s0.levels.len() != lp.level_count() {
        return Err(Error::DimensionMismatch {
            expected: lp.level_count(),
            got: s0.levels.len(),
        });
    }
    let topology = build_multilevel_star(lp.counts())?;
    let depths = node_depths(&topology);
    let mut full = FullState::new(depths.iter().map(|&d| s0.levels[d]).collect())?;
    let mut reduced = s0.clone();
    let mut worst = 0.0f64;
    for _ in 0..steps {
        full = step_full(&topology, lp.params(), &full)?;
        reduced = apply_f_multilevel(lp, &reduced)?;
        let p = full.as_slice();
        for (node, &d) in depths.iter().enumerate() {
            worst = worst.max((p[node] - reduced.levels[d]).abs());
        }
    }
    Ok(worst)
}

/// One step of the heterogeneous-spoke homogenization check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadStep {
    /// Spoke spread (max − min) before the step.
    pub spread_before: f64,
    /// Spoke spread after the step.
    pub spread_after: f64,
    /// Predicted contraction factor `a·(1 − b·p₀)` from the pre-step hub.
    pub predicted_factor: f64,
}

/// Outcome of [`spread_decay_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadCheck {
    pub steps: Vec<SpreadStep>,
    /// Largest `|spread_after/spread_before − predicted_factor|` among steps
    /// whose pre-step spread was at least the floor passed in.
    pub max_ratio_error: f64,
    pub final_spread: f64,
}

/// Runs a star with unequal spoke values forward and compares each step's
/// observed spread contraction against the predicted factor.
///
/// The ratio is only meaningful while the spread sits comfortably above
/// rounding noise, so steps whose pre-step spread is below `ratio_floor` are
/// recorded but excluded from `max_ratio_error`. The spread itself keeps
/// shrinking regardless; `final_spread` shows how far it got.
pub fn spread_decay_check(
    sp: StarParams,
    hub0: f64,
    spokes0: &[f64],
    steps: usize,
    ratio_floor: f64,
) -> Result<SpreadCheck, Error> {
    if spokes0.len() != sp.n() as usize {
        return Err(Error::DimensionMismatch {
            expected: sp.n() as usize,
            got: spokes0.len(),
        });
    }
    // rejects NaN along with nonpositive floors
    if ratio_floor.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::OutOfRange {
            name: "ratio_floor",
            value: ratio_floor,
            range: "(0, ∞)",
        });
    }
    let topology = build_star(sp.n())?;
    let mut nodes = Vec::with_capacity(spokes0.len() + 1);
    nodes.push(hub0);
    nodes.extend_from_slice(spokes0);
    let mut state = FullState::new(nodes)?;

    let mut records = Vec::with_capacity(steps);
    let mut max_ratio_error = 0.0f64;
    for _ in 0..steps {
        let hub_p = state.as_slice()[0];
        let spread_before = spoke_spread(&topology, &state)?;
        let predicted_factor = spread_decay_factor(sp.params(), hub_p);
        state = step_full(&topology, sp.params(), &state)?;
        let spread_after = spoke_spread(&topology, &state)?;
        if spread_before >= ratio_floor {
            max_ratio_error =
                max_ratio_error.max((spread_after / spread_before - predicted_factor).abs());
        }
        records.push(SpreadStep {
            spread_before,
            spread_after,
            predicted_factor,
        });
    }
    let final_spread = records.last().map_or(0.0, |r| r.spread_after);
    Ok(SpreadCheck {
        steps: records,
        max_ratio_error,
        final_spread,
    })
}

// ---------------------------------------------------------------------------
