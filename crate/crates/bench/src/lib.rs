//! Shared fixtures for the benchmark targets.

use starlike_sis::{LevelParams, Params, StarParams};

/// Mid-range supercritical star used by most benchmarks.
pub fn default_star() -> StarParams {
    StarParams::from_parts(0.5, 0.6, 4).expect("valid parameters")
}

/// Wide star exercising the per-node recursion at realistic size.
pub fn wide_star(n: u32) -> StarParams {
    StarParams::from_parts(0.5, 0.6, n).expect("valid parameters")
}

/// Three-level tree fixture for the multilevel map.
pub fn default_tree() -> LevelParams {
    LevelParams::new(Params::new(0.5, 0.4).expect("valid parameters"), vec![3, 2])
        .expect("valid counts")
}
