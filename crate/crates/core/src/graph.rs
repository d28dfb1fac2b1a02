//! Full per-node dynamics on star and starlike tree topologies.
//!
//! This module is the ground truth the reduced maps are validated against:
//! it iterates the update rule node by node with no symmetry assumptions.

use crate::error::Error;
use crate::params::Params;

/// Undirected tree topology as per-node neighbor lists.
///
/// Built only through [`build_star`] / [`build_multilevel_star`], which
/// guarantee symmetry, no self-loops, and no duplicate edges. Neighbor lists
/// store the parent (toward the hub) first, then children in index order;
/// [`step_full`] folds transmission factors in exactly this order, which is
/// what makes homogeneous runs bit-identical to the reduced maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphTopology {
    neighbors: Vec<Vec<usize>>,
}

impl GraphTopology {
    #[inline]
    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// True when node 0 is adjacent to every other node and every other node
    /// has degree 1 (a 2-level star with at least one spoke).
    pub fn is_star(&self) -> bool {
        let n = self.node_count();
        n >= 2 && self.degree(0) == n - 1 && (1..n).all(|i| self.neighbors[i] == [0])
    }
}

/// Infection probability per node, every entry in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    p: Vec<f64>,
}

impl FullState {
    pub fn new(p: Vec<f64>) -> Result<Self, Error> {
        if let Some(&bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange {
                name: "p[i]",
                value: bad,
                range: "[0, 1]",
            });
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.p.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }
}

/// Star with hub node 0 adjacent to spokes 1..=n.
pub fn build_star(n: u32) -> Result<GraphTopology, Error> {
    if n < 1 {
        return Err(Error::CountTooSmall {
            what: "spoke count n",
            min: 1,
        });
    }
    let n = n as usize;
    let mut neighbors = vec![Vec::new(); n + 1];
    neighbors[0] = (1..=n).collect();
    for spoke in neighbors.iter_mut().skip(1) {
        spoke.push(0);
    }
    Ok(GraphTopology { neighbors })
}

/// Starlike tree: the hub is level 1; every level-k node gets `counts[k-1]`
/// children at level k+1. `counts = [n]` reproduces `build_star(n)`.
///
/// Nodes are numbered breadth-first (level by level), so the hub is node 0.
pub fn build_multilevel_star(counts: &[u32]) -> Result<GraphTopology, Error> {
    if counts.is_empty() || counts.contains(&0) {
        return Err(Error::CountTooSmall {
            what: "every level count",
            min: 1,
        });
    }
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new()];
    let mut level: Vec<usize> = vec![0];
    for &nk in counts {
        let mut next_level = Vec::new();
        for &parent in &level {
            for _ in 0..nk {
                let child = neighbors.len();
                neighbors.push(vec![parent]); // parent first; see GraphTopology docs
                neighbors[parent].push(child);
                next_level.push(child);
            }
        }
        level = next_level;
    }
    Ok(GraphTopology { neighbors })
}

/// One synchronous update: `p'[i] = 1 − (1 − a·p[i]) · ∏_{j∼i} (1 − b·p[j])`.
pub fn step_full(
    topology: &GraphTopology,
    params: Params,
    state: &FullState,
) -> Result<FullState, Error> {
    if state.len() != topology.node_count() {
        return Err(Error::DimensionMismatch {
            expected: topology.node_count(),
            got: state.len(),
        });
    }
    let (a, b) = (params.a(), params.b());
    let p = state.as_slice();
    let mut next = Vec::with_capacity(p.len());
    for (i, &pi) in p.iter().enumerate() {
        let mut dodge = 1.0;
        for &j in topology.neighbors(i) {
            dodge *= 1.0 - b * p[j];
        }
        next.push(1.0 - (1.0 - a * pi) * dodge);
    }
    Ok(FullState { p: next })
}

/// Max over spoke pairs of `|p[i] − p[j]|` on a 2-level star, i.e. the
/// heterogeneity of the spokes.
pub fn spoke_spread(topology: &GraphTopology, state: &FullState) -> Result<f64, Error> {
    if !topology.is_star() {
        return Err(Error::NotAStar);
    }
    if state.len() != topology.node_count() {
        return Err(Error::DimensionMismatch {
            expected: topology.node_count(),
            got: state.len(),
        });
    }
    let spokes = &state.as_slice()[1..];
    let max = spokes.iter().cloned().fold(f64::MIN, f64::max);
    let min = spokes.iter().cloned().fold(f64::MAX, f64::min);
    Ok(max - min)
}

/// Exact one-step contraction factor for the spoke spread on a star whose hub
/// currently has probability `hub_p`.
///
/// Two spokes see the same hub, so their updates differ only through the
/// retained own-infection term: `p'[i] − p'[j] = a·(1 − b·p₀)·(p[i] − p[j])`.
pub fn spread_decay_factor(params: Params, hub_p: f64) -> f64 {
    params.a() * (1.0 - params.b() * hub_p)
}

/// Distance (in edges) of every node from the hub. For the trees built here
/// this is the level index, zero-based.
pub fn node_depths(topology: &GraphTopology) -> Vec<usize> {
    let n = topology.node_count();
    let mut depth = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    depth[0] = 0;
    while let Some(v) = queue.pop_front() {
        for &w in topology.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}

/// Within-level spread (max − min of `p`) for each depth level.
pub fn level_spread(topology: &GraphTopology, state: &FullState) -> Result<Vec<f64>, Error> {
    if state.len() != topology.node_count() {
        return Err(Error::DimensionMismatch {
            expected: topology.node_count(),
            got: state.len(),
        });
    }
    let depths = node_depths(topology);
    let levels = depths.iter().max().copied().unwrap_or(0) + 1;
    let mut min = vec![f64::MAX; levels];
    let mut max = vec![f64::MIN; levels];
    for (i, &d) in depths.iter().enumerate() {
        let v = state.as_slice()[i];
        min[d] = min[d].min(v);
        max[d] = max[d].max(v);
    }
    Ok(min.iter().zip(&max).map(|(lo, hi)| hi - lo).collect())
}
