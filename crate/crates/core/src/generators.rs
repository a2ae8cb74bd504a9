//! Random graph models used as comparison corpora.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GraphError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    /// Points uniform in the unit hypercube, joined when within `radius`.
    RandomGeometric {
        n: usize,
        radius: f64,
        dim: usize,
    },
    /// Ring lattice with `k` neighbours per node, each edge rewired with
    /// probability `beta`.
    WattsStrogatz {
        n: usize,
        k: usize,
        beta: f64,
    },
    /// Preferential attachment from a complete seed graph on `m0` nodes;
    /// every new node attaches to `m_attach` distinct existing nodes.
    BarabasiAlbert {
        n: usize,
        m0: usize,
        m_attach: usize,
    },
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParameter(msg.into())
}

fn check_probability(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Model::ErdosRenyi { p, .. } => check_probability("p", p),
            Model::RandomGeometric { radius, dim, .. } => {
                if dim == 0 {
                    return Err(invalid("dimension must be positive"));
                }
                if !(radius >= 0.0 && radius.is_finite()) {
                    return Err(invalid(format!(
                        "radius must be non-negative, got {radius}"
                    )));
                }
                Ok(())
            }
            Model::WattsStrogatz { n, k, beta } => {
                check_probability("beta", beta)?;
                if k % 2 != 0 {
                    return Err(invalid(format!("ring degree k must be even, got {k}")));
                }
                if k >= n {
                    return Err(invalid(format!(
                        "ring degree k = {k} needs n > k, got n = {n}"
                    )));
                }
                Ok(())
            }
            Model::BarabasiAlbert { n, m0, m_attach } => {
                if m_attach == 0 || m_attach > m0 {
                    return Err(invalid(format!(
                        "need 1 <= m_attach <= m0, got m_attach = {m_attach}, m0 = {m0}"
                    )));
                }
                if n < m0 {
                    return Err(invalid(format!("need n >= m0, got n = {n}, m0 = {m0}")));
                }
                Ok(())
            }
        }
    }
}

/// Draws one graph from `model`. The same model and seed always give the
/// same graph.
pub fn generate(model: &Model, seed: u64) -> Result<Graph> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *model {
        Model::ErdosRenyi { n, p } => erdos_renyi(n, p, &mut rng),
        Model::RandomGeometric { n, radius, dim } => random_geometric(n, radius, dim, &mut rng),
        Model::WattsStrogatz { n, k, beta } => watts_strogatz(n, k, beta, &mut rng),
        Model::BarabasiAlbert { n, m0, m_attach } => barabasi_albert(n, m0, m_attach, &mut rng),
    }
}

fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if p >= 1.0 || rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn random_geometric<R: Rng>(n: usize, radius: f64, dim: usize, rng: &mut R) -> Result<Graph> {
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let d2: f64 = points[u]
                .iter()
                .zip(&points[v])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2 <= r2 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn watts_strogatz<R: Rng>(n: usize, k: usize, beta: f64, rng: &mut R) -> Result<Graph> {
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    let mut ring = Vec::with_capacity(n * k / 2);
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
            ring.push((u, v));
        }
    }
    // rewire the far endpoint of each lattice edge, lap by lap
    for (u, v) in ring {
        if beta <= 0.0 || rng.gen::<f64>() >= beta {
            continue;
        }
        if adj[u].len() >= n - 1 {
            continue;
        }
        let w = loop {
            let w = rng.gen_range(0..n);
            if w != u && !adj[u].contains(&w) {
                break w;
            }
        };
        adj[u].remove(&v);
        adj[v].remove(&u);
        adj[u].insert(w);
        adj[w].insert(u);
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| {
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&v| v > u).collect();
            nb.sort_unstable();
            nb.into_iter().map(move |v| (u, v))
        })
        .collect();
    Graph::from_edges(n, edges)
}

fn barabasi_albert<R: Rng>(n: usize, m0: usize, m_attach: usize, rng: &mut R) -> Result<Graph> {
    let mut edges: Vec<(usize, usize)> = (0..m0)
        .flat_map(|u| (u + 1..m0).map(move |v| (u, v)))
        .collect();
    // every endpoint occurrence, so uniform draws are degree-proportional
    let mut endpoints: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    if endpoints.is_empty() {
        // a single seed node has no degree yet; give it unit weight
        endpoints.extend(0..m0);
    }
    for new in m0..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m_attach);
        while targets.len() < m_attach {
            let t = *endpoints.choose(rng).expect("endpoint pool is never empty");
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        targets.sort_unstable();
        for t in targets {
            edges.push((t, new));
            endpoints.push(t);
            endpoints.push(new);
        }
    }
    Graph::from_edges(n, edges)
}
