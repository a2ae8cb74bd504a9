//! Height-2 subtree patterns of Weisfeiler–Lehman style tree unfoldings,
//! and their equivalence with neighbourhood degree sequences.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, Result};
use crate::graph::Graph;
use crate::nds::NdsTable;

/// How a height-1 node counts its branches in the unfolding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Unfolding {
    /// The edge back to the root is unfolded like any other, so a
    /// height-1 node has as many branches as its degree.
    #[default]
    WithBackEdge,
    /// The edge back to the root is not unfolded again.
    WithoutBackEdge,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SubtreePattern {
    pub root_degree: usize,
    /// Branch count of every height-1 node, ascending.
    pub child_degrees: Vec<usize>,
}

/// An explicit rooted tree; node 0 is the root.
struct Tree {
    children: Vec<Vec<usize>>,
}

impl Tree {
    fn unfold(g: &Graph, root: usize, height: usize, mode: Unfolding) -> Tree {
        let mut children = vec![Vec::new()];
        // (tree node, graph node, graph parent)
        let mut frontier = vec![(0usize, root, None::<usize>)];
        for _ in 0..height {
            let mut next = Vec::new();
            for (t, u, parent) in frontier {
                for &v in g.neighbours(u) {
                    if mode == Unfolding::WithoutBackEdge && Some(v) == parent {
                        continue;
                    }
                    let id = children.len();
                    children.push(Vec::new());
                    children[t].push(id);
                    next.push((id, v, Some(u)));
                }
            }
            frontier = next;
        }
        Tree { children }
    }
}

/// The unlabelled height-2 subtree rooted at `node`.
pub fn subtree_pattern(
    g: &Graph,
    node: usize,
    height: usize,
    mode: Unfolding,
) -> Result<SubtreePattern> {
    if height != 2 {
        return Err(GraphError::InvalidParameter(format!(
            "only height-2 subtrees are supported, got {height}"
        )));
    }
    if node >= g.node_count() {
        return Err(GraphError::InvalidParameter(format!(
            "node {node} out of range for {} nodes",
            g.node_count()
        )));
    }
    let tree = Tree::unfold(g, node, height, mode);
    let mut child_degrees: Vec<usize> = tree.children[0]
        .iter()
        .map(|&c| tree.children[c].len())
        .collect();
    child_degrees.sort_unstable();
    Ok(SubtreePattern {
        root_degree: tree.children[0].len(),
        child_degrees,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub holds: bool,
    /// A pair on which subtree equality and sequence equality disagree.
    pub counterexample: Option<(usize, usize)>,
}

/// Checks that two nodes share a height-2 subtree pattern exactly when
/// they share a neighbourhood degree sequence.
pub fn verify_equivalence(g: &Graph, mode: Unfolding) -> Equivalence {
    let table = NdsTable::new(g);
    let mut by_pattern: HashMap<SubtreePattern, usize> = HashMap::new();
    let mut by_sequence: HashMap<&[usize], usize> = HashMap::new();
    let mut patterns = Vec::with_capacity(g.node_count());
    for u in 0..g.node_count() {
        patterns.push(subtree_pattern(g, u, 2, mode).expect("height 2 and node in range"));
    }
    for (u, pattern) in patterns.iter().enumerate() {
        let first_p = *by_pattern.entry(pattern.clone()).or_insert(u);
        let first_s = *by_sequence.entry(table.sequence(u)).or_insert(u);
        if table.sequence(first_p) != table.sequence(u) {
            return Equivalence {
                holds: false,
                counterexample: Some((first_p, u)),
            };
        }
        if patterns[first_s] != *pattern {
            return Equivalence {
                holds: false,
                counterexample: Some((first_s, u)),
            };
        }
    }
    Equivalence {
        holds: true,
        counterexample: None,
    }
}
