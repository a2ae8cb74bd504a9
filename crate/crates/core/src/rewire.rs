//! Degree-preserving randomisation by double edge swaps.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewireConfig {
    /// Successful swaps to perform per edge.
    pub swaps_per_edge: usize,
    /// Attempts are capped at `max_attempts_factor * swaps_per_edge * m`.
    pub max_attempts_factor: usize,
    pub seed: u64,
}

impl Default for RewireConfig {
    fn default() -> Self {
        RewireConfig {
            swaps_per_edge: 10,
            max_attempts_factor: 10,
            seed: 0,
        }
    }
}

impl RewireConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        RewireConfig { seed, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.swaps_per_edge == 0 || self.max_attempts_factor == 0 {
            return Err(GraphError::InvalidParameter(
                "swaps_per_edge and max_attempts_factor must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Rewired {
    pub graph: Graph,
    pub target_swaps: usize,
    pub swaps: usize,
    pub attempts: usize,
}

impl Rewired {
    /// Whether the swap quota was met within the attempt budget.
    pub fn complete(&self) -> bool {
        self.swaps >= self.target_swaps
    }
}

#[inline]
fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Randomises `g` while keeping every node's degree.
///
/// Two distinct edges `(a, b)` and `(c, d)` are drawn uniformly; with equal
/// probability they become `(a, d), (c, b)` or `(a, c), (b, d)`. A swap that
/// would create a self-loop or repeat an existing edge is rejected. When the
/// quota cannot be met the partially rewired graph is returned and
/// [`Rewired::complete`] is false.
pub fn rewire(g: &Graph, cfg: &RewireConfig) -> Result<Rewired> {
    cfg.validate()?;
    let m = g.edge_count();
    if m < 2 {
        return Err(GraphError::validation("rewiring needs at least two edges"));
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    let target = cfg.swaps_per_edge * m;
    let budget = cfg.max_attempts_factor * target;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let (mut swaps, mut attempts) = (0, 0);
    while swaps < target && attempts < budget {
        attempts += 1;
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        // new edges (a, d) and (c, b)
        if a == d || c == b || a == c || b == d {
            continue;
        }
        let (e1, e2) = (key(a, d), key(c, b));
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        present.insert(e1);
        present.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
        swaps += 1;
    }

    let graph = Graph::from_edges(g.node_count(), edges)?;
    let graph = match g.labels() {
        Some(labels) => graph.with_labels(labels.to_vec())?,
        None => graph,
    };
    Ok(Rewired {
        graph,
        target_swaps: target,
        swaps,
        attempts,
    })
}
