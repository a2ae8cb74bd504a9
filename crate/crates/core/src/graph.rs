//! Immutable undirected simple graphs in compressed adjacency form.

use std::collections::VecDeque;
use std::io::Write;

use crate::error::{GraphError, Result};

/// An undirected simple graph on nodes `0..n`.
///
/// Neighbour lists are stored back to back in `targets`, with node `i`
/// owning `targets[offsets[i]..offsets[i + 1]]`. Every list is sorted
/// ascending and every edge appears once in each endpoint's list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from undirected edges. Self-loops, repeated edges and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::validation(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(GraphError::validation(format!("self-loop on node {u}")));
            }
            arcs.push((u, v));
            arcs.push((v, u));
        }
        arcs.sort_unstable();
        if let Some(w) = arcs.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            return Err(GraphError::validation(format!(
                "duplicate edge ({}, {})",
                u.min(v),
                u.max(v)
            )));
        }

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.into_iter().map(|(_, v)| v).collect();
        Ok(Graph {
            offsets,
            targets,
            labels: None,
        })
    }

    /// Attaches external node identifiers. The label count must equal `n`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(GraphError::validation(format!(
                "{} labels supplied for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Degree of every node, indexed by node.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|i| self.degree(i)).collect()
    }

    #[inline]
    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbours(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbours(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `2m / (n (n - 1))`, or zero when `n < 2`.
    pub fn density(&self) -> f64 {
        let n = self.node_count() as f64;
        if n < 2.0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / (n * (n - 1.0))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External identifier of a node, falling back to its index.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(labels) => labels[node].clone(),
            None => node.to_string(),
        }
    }

    /// Component id per node; ids are assigned in order of each
    /// component's smallest node.
    pub fn component_ids(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbours(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.component_ids().into_iter().max().map_or(0, |c| c + 1)
    }

    /// Writes the graph as a whitespace edge list using node labels.
    /// Isolated nodes are not representable in this format and are dropped.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.label(u), self.label(v))?;
        }
        Ok(())
    }

    /// Writes the graph as a symmetric pattern MatrixMarket file (1-based,
    /// lower triangle). Isolated nodes survive through the header.
    pub fn write_matrix_market<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.node_count();
        writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
        writeln!(out, "{n} {n} {}", self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", v + 1, u + 1)?;
        }
        Ok(())
    }
}
