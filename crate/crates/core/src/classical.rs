//! Classical global indices: transitivity, normalised degree variance,
//! characteristic path length, degree assortativity and modularity.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::Graph;
use crate::indices::{variance, VarianceMode};
use crate::modularity;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ClassicalIndexSet {
    #[serde(rename = "C")]
    pub transitivity: Option<f64>,
    /// Raw degree variance under the report's variance convention.
    #[serde(rename = "v")]
    pub degree_variance: Option<f64>,
    #[serde(rename = "v_hat")]
    pub degree_variance_normalised: Option<f64>,
    #[serde(rename = "L")]
    pub path_length: Option<f64>,
    /// Unordered node pairs with no connecting path, excluded from `L`.
    pub unreachable_pairs: Option<u64>,
    #[serde(rename = "r")]
    pub assortativity: Option<f64>,
    #[serde(rename = "Q")]
    pub modularity: Option<f64>,
}

pub fn classical_indices(g: &Graph, mode: VarianceMode, seed: u64) -> ClassicalIndexSet {
    let paths = characteristic_path_length(g);
    ClassicalIndexSet {
        transitivity: transitivity(g),
        degree_variance: variance(g.degrees().into_iter().map(|k| k as f64), mode),
        degree_variance_normalised: degree_variance_normalised(g),
        path_length: paths.mean,
        unreachable_pairs: Some(paths.unreachable_pairs),
        assortativity: assortativity(g),
        modularity: modularity::modularity(g, seed),
    }
}

/// Number of triangles, each counted once.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut count = 0u64;
    for u in 0..g.node_count() {
        let nu = g.neighbours(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            // common neighbours w > v via a sorted merge
            let nv = g.neighbours(v);
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            count += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    count
}

/// `3 × triangles / connected triples`; undefined without any path of length two.
pub fn transitivity(g: &Graph) -> Option<f64> {
    let triples: u64 = (0..g.node_count())
        .map(|i| {
            let k = g.degree(i) as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        return None;
    }
    Some(3.0 * triangle_count(g) as f64 / triples as f64)
}

/// Clique size `k` and the number of clique nodes the extra node joins in
/// the quasi-complete graph with `n` nodes and `m` edges.
fn quasi_complete_shape(n: usize, m: usize) -> (usize, usize) {
    assert!(
        m <= n * n.saturating_sub(1) / 2,
        "too many edges for {n} nodes"
    );
    let mut k = 0usize;
    while k < n && (k + 1) * k / 2 <= m {
        k += 1;
    }
    (k, m - k * k.saturating_sub(1) / 2)
}

/// Degrees of the quasi-complete graph with `n` nodes and `m` edges: a
/// clique on the first `k` nodes plus one node joined to `m − C(k,2)` of them.
pub fn quasi_complete_degrees(n: usize, m: usize) -> Vec<usize> {
    let (k, rest) = quasi_complete_shape(n, m);
    let mut deg = vec![0usize; n];
    for (i, d) in deg.iter_mut().enumerate().take(k) {
        *d = k - 1 + usize::from(i < rest);
    }
    if rest > 0 {
        deg[k] = rest;
    }
    deg
}

/// Degrees of the quasi-star graph with `n` nodes and `m` edges, the
/// complement of the quasi-complete graph with `C(n,2) − m` edges.
pub fn quasi_star_degrees(n: usize, m: usize) -> Vec<usize> {
    let total = n * n.saturating_sub(1) / 2;
    quasi_complete_degrees(n, total - m)
        .into_iter()
        .map(|d| n - 1 - d)
        .collect()
}

pub fn quasi_complete_graph(n: usize, m: usize) -> Graph {
    let (k, rest) = quasi_complete_shape(n, m);
    let mut edges: Vec<(usize, usize)> = (0..k)
        .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
        .collect();
    edges.extend((0..rest).map(|u| (u, k)));
    Graph::from_edges(n, edges).expect("quasi-complete construction is simple")
}

pub fn quasi_star_graph(n: usize, m: usize) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let base = quasi_complete_graph(n, total - m);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !base.has_edge(u, v))
        .collect();
    Graph::from_edges(n, edges).expect("complement of a simple graph is simple")
}

fn population_variance(deg: &[usize]) -> f64 {
    variance(deg.iter().map(|&k| k as f64), VarianceMode::Population).unwrap_or(0.0)
}

/// Largest degree variance over graphs with `n` nodes and `m` edges, which
/// is attained by the quasi-star or the quasi-complete graph.
pub fn max_degree_variance(n: usize, m: usize) -> f64 {
    population_variance(&quasi_complete_degrees(n, m))
        .max(population_variance(&quasi_star_degrees(n, m)))
}

/// Degree variance divided by the largest variance attainable at the same
/// `n` and `m`. The ratio does not depend on the variance convention.
pub fn degree_variance_normalised(g: &Graph) -> Option<f64> {
    let n = g.node_count();
    if n < 3 {
        return None;
    }
    let v = population_variance(&g.degrees());
    if v == 0.0 {
        return Some(0.0);
    }
    Some(v / max_degree_variance(n, g.edge_count()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLengthSummary {
    pub mean: Option<f64>,
    pub finite_pairs: u64,
    pub unreachable_pairs: u64,
}

fn bfs_distance_sum(g: &Graph, source: usize, dist: &mut [usize]) -> (u64, u64) {
    dist.fill(usize::MAX);
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let (mut sum, mut reached) = (0u64, 0u64);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbours(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                if v > source {
                    sum += dist[v] as u64;
                    reached += 1;
                }
                queue.push_back(v);
            }
        }
    }
    (sum, reached)
}

/// Mean shortest-path length over unordered pairs joined by some path.
pub fn characteristic_path_length(g: &Graph) -> PathLengthSummary {
    let n = g.node_count();
    let (sum, finite) = (0..n)
        .into_par_iter()
        .map_init(
            || vec![usize::MAX; n],
            |dist, s| bfs_distance_sum(g, s, dist),
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    PathLengthSummary {
        mean: (finite > 0).then(|| sum as f64 / finite as f64),
        finite_pairs: finite,
        unreachable_pairs: total - finite,
    }
}

/// Pearson correlation of endpoint degrees over every edge in both
/// orientations. Undefined when all endpoint degrees are equal.
pub fn assortativity(g: &Graph) -> Option<f64> {
    let m = g.edge_count();
    if m == 0 {
        return None;
    }
    let pairs: Vec<(f64, f64)> = g
        .edges()
        .map(|(u, v)| (g.degree(u) as f64, g.degree(v) as f64))
        .collect();
    // both orientations share one mean
    let mean = pairs.iter().map(|&(a, b)| a + b).sum::<f64>() / (2 * m) as f64;
    let (mut cov, mut var) = (0.0, 0.0);
    for &(a, b) in &pairs {
        let (da, db) = (a - mean, b - mean);
        cov += 2.0 * da * db;
        var += da * da + db * db;
    }
    if var <= 1e-12 * (2 * m) as f64 {
        return None;
    }
    Some((cov / var).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn transitivity_extremes() {
        assert_eq!(transitivity(&complete(4)), Some(1.0));
        assert_eq!(transitivity(&star(5)), Some(0.0));
        assert_eq!(transitivity(&graph(4, &[(0, 1), (2, 3)])), None);
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangle_count(&complete(5)), 10);
        // two triangles sharing an edge
        assert_eq!(
            triangle_count(&graph(4, &[(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])),
            2
        );
    }

    #[test]
    fn path_lengths() {
        assert_eq!(characteristic_path_length(&complete(6)).mean, Some(1.0));
        let p = characteristic_path_length(&graph(3, &[(0, 1), (1, 2)]));
        assert!((p.mean.unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let two = characteristic_path_length(&graph(4, &[(0, 1), (2, 3)]));
        assert_eq!(two.mean, Some(1.0));
        assert_eq!(two.finite_pairs, 2);
        assert_eq!(two.unreachable_pairs, 4);
    }

    #[test]
    fn assortativity_cases() {
        assert_eq!(assortativity(&complete(5)), None);
        let r = assortativity(&star(6)).unwrap();
        assert!((r + 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn quasi_complete_shapes() {
        // m = 7 on 6 nodes: K4 (6 edges) + one node joined to 1
        assert_eq!(quasi_complete_degrees(6, 7), vec![4, 3, 3, 3, 1, 0]);
        assert_eq!(quasi_complete_degrees(4, 6), vec![3, 3, 3, 3]);
        assert_eq!(quasi_complete_degrees(5, 0), vec![0; 5]);
        for n in 3..9 {
            for m in 0..=n * (n - 1) / 2 {
                let qc = quasi_complete_graph(n, m);
                assert_eq!(qc.edge_count(), m);
                let mut d = qc.degrees();
                let mut expected = quasi_complete_degrees(n, m);
                d.sort_unstable();
                expected.sort_unstable();
                assert_eq!(d, expected);
                let qs = quasi_star_graph(n, m);
                assert_eq!(qs.edge_count(), m);
                let mut d = qs.degrees();
                let mut expected = quasi_star_degrees(n, m);
                d.sort_unstable();
                expected.sort_unstable();
                assert_eq!(d, expected);
            }
        }
    }

    #[test]
    fn normalised_variance_bounds() {
        assert_eq!(degree_variance_normalised(&complete(5)), Some(0.0));
        let qs = quasi_star_graph(8, 10);
        let qc = quasi_complete_graph(8, 10);
        let best = degree_variance_normalised(&qs)
            .unwrap()
            .max(degree_variance_normalised(&qc).unwrap());
        assert!((best - 1.0).abs() < 1e-12);
        // path of 8 nodes sits strictly between
        let path: Vec<_> = (0..7).map(|i| (i, i + 1)).collect();
        let v = degree_variance_normalised(&graph(8, &path)).unwrap();
        assert!(v > 0.0 && v < 1.0, "{v}");
    }
}
