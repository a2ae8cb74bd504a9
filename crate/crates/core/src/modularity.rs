//! Modularity maximisation.
//!
//! Greedy agglomeration (Clauset–Newman–Moore) merges the pair of
//! communities with the largest modularity gain until no merge helps. The
//! result is then refined by single-node moves in a seeded random order.
//! The returned value is a lower bound on the optimum.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

const MAX_REFINE_PASSES: usize = 100;
const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community label per node, numbered by first appearance.
    pub membership: Vec<usize>,
    pub modularity: f64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.membership.iter().max().map_or(0, |&c| c + 1)
    }
}

/// Modularity of the partition found for `g`; undefined without edges.
pub fn modularity(g: &Graph, seed: u64) -> Option<f64> {
    best_partition(g, seed).map(|p| p.modularity)
}

/// `Σ_c [L_c / m − (d_c / 2m)²]` for the given labels.
pub fn partition_modularity(g: &Graph, membership: &[usize]) -> Option<f64> {
    let m = g.edge_count();
    if m == 0 {
        return None;
    }
    let communities = membership.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0usize; communities];
    let mut degree = vec![0usize; communities];
    for u in 0..g.node_count() {
        degree[membership[u]] += g.degree(u);
    }
    for (u, v) in g.edges() {
        if membership[u] == membership[v] {
            internal[membership[u]] += 1;
        }
    }
    let two_m = 2.0 * m as f64;
    Some(
        internal
            .iter()
            .zip(&degree)
            .map(|(&l, &d)| l as f64 / m as f64 - (d as f64 / two_m).powi(2))
            .sum(),
    )
}

pub fn best_partition(g: &Graph, seed: u64) -> Option<Partition> {
    if g.edge_count() == 0 {
        return None;
    }
    let mut membership = greedy_agglomerate(g);
    refine(g, &mut membership, seed);
    let membership = relabel(&membership);
    let modularity = partition_modularity(g, &membership)?;
    Some(Partition {
        membership,
        modularity,
    })
}

fn relabel(membership: &[usize]) -> Vec<usize> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    membership
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    a: usize,
    b: usize,
    version_a: u32,
    version_b: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap on gain; ties go to the lexicographically smallest pair
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
    }
}

fn greedy_agglomerate(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let two_m = 2.0 * g.edge_count() as f64;
    let mut share: Vec<f64> = (0..n).map(|i| g.degree(i) as f64 / two_m).collect();
    let mut links: Vec<BTreeMap<usize, f64>> = (0..n)
        .map(|u| g.neighbours(u).iter().map(|&v| (v, 1.0 / two_m)).collect())
        .collect();
    let mut version = vec![0u32; n];
    let mut alive = vec![true; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    let mut heap = BinaryHeap::new();
    for (u, v) in g.edges() {
        heap.push(Candidate {
            gain: 2.0 * (links[u][&v] - share[u] * share[v]),
            a: u,
            b: v,
            version_a: 0,
            version_b: 0,
        });
    }

    while let Some(c) = heap.pop() {
        if !alive[c.a] || !alive[c.b] || version[c.a] != c.version_a || version[c.b] != c.version_b
        {
            continue;
        }
        if c.gain <= GAIN_EPS {
            break;
        }
        // fold the community with fewer links into the other
        let (keep, gone) = if links[c.a].len() >= links[c.b].len() {
            (c.a, c.b)
        } else {
            (c.b, c.a)
        };
        let gone_links = std::mem::take(&mut links[gone]);
        for (&k, &e) in &gone_links {
            if k == keep {
                continue;
            }
            *links[keep].entry(k).or_insert(0.0) += e;
            links[k].remove(&gone);
            *links[k].entry(keep).or_insert(0.0) += e;
        }
        links[keep].remove(&gone);
        share[keep] += share[gone];
        alive[gone] = false;
        version[keep] += 1;
        let moved = std::mem::take(&mut members[gone]);
        members[keep].extend(moved);

        for (&k, &e) in &links[keep] {
            let (a, b) = (keep.min(k), keep.max(k));
            heap.push(Candidate {
                gain: 2.0 * (e - share[keep] * share[k]),
                a,
                b,
                version_a: version[a],
                version_b: version[b],
            });
        }
    }

    let mut membership = vec![0usize; n];
    for (c, nodes) in members.iter().enumerate() {
        for &u in nodes {
            membership[u] = c;
        }
    }
    membership
}

fn refine(g: &Graph, membership: &mut [usize], seed: u64) {
    let n = g.node_count();
    let two_m = 2.0 * g.edge_count() as f64;
    let mut total = vec![0.0; n];
    for u in 0..n {
        total[membership[u]] += g.degree(u) as f64;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..MAX_REFINE_PASSES {
        order.shuffle(&mut rng);
        let mut moved = false;
        for &u in &order {
            let k = g.degree(u) as f64;
            if k == 0.0 {
                continue;
            }
            let current = membership[u];
            let mut to: BTreeMap<usize, f64> = BTreeMap::new();
            for &v in g.neighbours(u) {
                *to.entry(membership[v]).or_insert(0.0) += 1.0;
            }
            total[current] -= k;
            let gain = |c: usize, links: f64| links - total[c] * k / two_m;
            let stay = gain(current, to.get(&current).copied().unwrap_or(0.0));
            let mut best = (current, stay);
            for (&c, &links) in &to {
                let gc = gain(c, links);
                if gc > best.1 + GAIN_EPS {
                    best = (c, gc);
                }
            }
            total[best.0] += k;
            if best.0 != current {
                membership[u] = best.0;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}
