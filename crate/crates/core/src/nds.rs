//! Neighbourhood degree sequences and their per-degree grouping.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::graph::Graph;

/// For each node, the ascending degrees of its neighbours.
///
/// Sequences share the graph's offsets, so node `i`'s sequence has exactly
/// `k_i` entries. The fingerprints only speed up grouping; equality is
/// always decided by comparing the sequences themselves.
#[derive(Debug, Clone)]
pub struct NdsTable {
    offsets: Vec<usize>,
    entries: Vec<usize>,
    fingerprints: Vec<u64>,
}

impl NdsTable {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut entries = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for i in 0..n {
            let start = entries.len();
            entries.extend(g.neighbours(i).iter().map(|&j| g.degree(j)));
            entries[start..].sort_unstable();
            offsets.push(entries.len());
        }
        let fingerprints = (0..n)
            .map(|i| fingerprint(&entries[offsets[i]..offsets[i + 1]]))
            .collect();
        NdsTable {
            offsets,
            entries,
            fingerprints,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn sequence(&self, node: usize) -> &[usize] {
        &self.entries[self.offsets[node]..self.offsets[node + 1]]
    }

    /// The node's own degree, which is the length of its sequence.
    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    #[inline]
    pub fn fingerprint(&self, node: usize) -> u64 {
        self.fingerprints[node]
    }

    /// Partition of the given nodes into groups of identical sequences.
    /// Groups appear in order of their first member.
    pub fn group_identical<I>(&self, nodes: I) -> Vec<Vec<usize>>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for node in nodes {
            let candidates = buckets.entry(self.fingerprints[node]).or_default();
            let seq = self.sequence(node);
            match candidates
                .iter()
                .find(|&&g| self.sequence(groups[g][0]) == seq)
            {
                Some(&g) => groups[g].push(node),
                None => {
                    candidates.push(groups.len());
                    groups.push(vec![node]);
                }
            }
        }
        groups
    }

    /// For each node, whether another node shares its sequence exactly.
    pub fn has_duplicate(&self) -> Vec<bool> {
        let mut dup = vec![false; self.node_count()];
        for group in self.group_identical(0..self.node_count()) {
            if group.len() > 1 {
                for node in group {
                    dup[node] = true;
                }
            }
        }
        dup
    }

    /// Nodes of each degree, keyed by degree in ascending order.
    pub fn degree_classes(&self) -> Vec<(usize, Vec<usize>)> {
        let mut by_degree: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.node_count() {
            let k = self.degree(i);
            if by_degree.len() <= k {
                by_degree.resize_with(k + 1, Vec::new);
            }
            by_degree[k].push(i);
        }
        by_degree
            .into_iter()
            .enumerate()
            .filter(|(_, nodes)| !nodes.is_empty())
            .collect()
    }
}

fn fingerprint(seq: &[usize]) -> u64 {
    let mut h = DefaultHasher::new();
    seq.hash(&mut h);
    h.finish()
}

/// Sequence statistics of one degree class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeClassSummary {
    /// The degree `p` shared by the class.
    pub degree: usize,
    /// Number of nodes of degree `p` (`q_p`).
    pub class_size: usize,
    /// Distinct sequences in the class, lexicographically sorted.
    pub sequences: Vec<Vec<usize>>,
    /// How many nodes carry each distinct sequence; sums to `class_size`.
    pub multiplicities: Vec<usize>,
    /// Multi-orderedness score, undefined for singleton classes.
    pub omega: Option<f64>,
}

impl DegreeClassSummary {
    #[inline]
    pub fn distinct(&self) -> usize {
        self.sequences.len()
    }

    /// Degrees held by at least two nodes. Degree zero is excluded, as
    /// its only sequence is empty.
    pub fn in_d2(&self) -> bool {
        self.degree > 0 && self.class_size >= 2
    }
}

/// `|σ_p| Σ_j (q_p − c_pj) / (q_p² (q_p − 1))`, or `None` when `q_p < 2`.
pub fn class_omega(multiplicities: &[usize]) -> Option<f64> {
    let q: usize = multiplicities.iter().sum();
    if q < 2 {
        return None;
    }
    let distinct = multiplicities.len() as f64;
    let offset: usize = multiplicities.iter().map(|&c| q - c).sum();
    let q = q as f64;
    Some(distinct * offset as f64 / (q * q * (q - 1.0)))
}

/// One summary per degree present in the graph, ascending by degree.
pub fn degree_class_summaries(t: &NdsTable) -> Vec<DegreeClassSummary> {
    t.degree_classes()
        .into_iter()
        .map(|(degree, nodes)| {
            let class_size = nodes.len();
            let mut groups: Vec<(Vec<usize>, usize)> = t
                .group_identical(nodes)
                .into_iter()
                .map(|g| (t.sequence(g[0]).to_vec(), g.len()))
                .collect();
            groups.sort();
            let (sequences, multiplicities): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
            let omega = class_omega(&multiplicities);
            DegreeClassSummary {
                degree,
                class_size,
                sequences,
                multiplicities,
                omega,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn star_sequences() {
        let t = NdsTable::new(&star(4));
        assert_eq!(t.sequence(0), &[1, 1, 1, 1]);
        for leaf in 1..=4 {
            assert_eq!(t.sequence(leaf), &[4]);
        }
    }

    #[test]
    fn triangle_sequences() {
        let t = NdsTable::new(&complete(3));
        for i in 0..3 {
            assert_eq!(t.sequence(i), &[2, 2]);
        }
    }

    #[test]
    fn sequences_are_sorted() {
        // 0 connects to a leaf (deg 1), a hub (deg 3) and a deg-2 node
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (0, 3), (2, 4), (2, 5), (3, 4)]).unwrap();
        let t = NdsTable::new(&g);
        assert_eq!(t.sequence(0), &[1, 2, 3]);
        assert_eq!(t.sequence(4), &[2, 3]);
    }

    #[test]
    fn complete_graph_single_class() {
        let s = degree_class_summaries(&NdsTable::new(&complete(4)));
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].degree, 3);
        assert_eq!(s[0].class_size, 4);
        assert_eq!(s[0].distinct(), 1);
        assert_eq!(s[0].multiplicities, vec![4]);
        assert_eq!(s[0].omega, Some(0.0));
    }

    #[test]
    fn omega_worked_example() {
        // q = 5, three distinct sequences with multiplicities 1, 2, 2
        let w = class_omega(&[1, 2, 2]).unwrap();
        assert!((w - 0.30).abs() < 1e-15);
        assert_eq!(class_omega(&[1, 1, 1, 1, 1]), Some(1.0));
        assert_eq!(class_omega(&[5]), Some(0.0));
        assert_eq!(class_omega(&[1]), None);
    }

    #[test]
    fn omega_brute_force_enumeration() {
        // Enumerate every multiplicity vector for q <= 8 and compare with a
        // direct count over ordered node pairs.
        fn partitions(q: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if q == 0 {
                out.push(acc.clone());
                return;
            }
            for c in (1..=q.min(max)).rev() {
                acc.push(c);
                partitions(q - c, c, acc, out);
                acc.pop();
            }
        }
        for q in 2..=8 {
            let mut all = Vec::new();
            partitions(q, q, &mut Vec::new(), &mut all);
            for mult in all {
                // label each node with its group, then count pairs
                let labels: Vec<usize> = mult
                    .iter()
                    .enumerate()
                    .flat_map(|(g, &c)| std::iter::repeat_n(g, c))
                    .collect();
                let mut offset = 0usize;
                for g in 0..mult.len() {
                    offset += labels.iter().filter(|&&l| l != g).count();
                }
                let expected =
                    mult.len() as f64 * offset as f64 / ((q * q) as f64 * (q - 1) as f64);
                let got = class_omega(&mult).unwrap();
                assert!((got - expected).abs() < 1e-15, "{mult:?}");
                assert!((0.0..=1.0).contains(&got));
            }
        }
    }

    #[test]
    fn isolated_nodes_form_degree_zero_class() {
        let g = Graph::from_edges(5, [(0, 1)]).unwrap();
        let s = degree_class_summaries(&NdsTable::new(&g));
        assert_eq!(s[0].degree, 0);
        assert_eq!(s[0].class_size, 3);
        assert_eq!(s[0].sequences, vec![Vec::<usize>::new()]);
        assert!(!s[0].in_d2());
        assert!(s[1].in_d2());
    }

    #[test]
    fn group_identical_handles_distinct_sequences() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let t = NdsTable::new(&g);
        // path of 6: ends {2}; next {1,2}; middle {2,2}
        let groups = t.group_identical(0..6);
        assert_eq!(groups, vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
        assert!(t.has_duplicate().iter().all(|&d| d));
    }
}
