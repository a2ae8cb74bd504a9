//! Edge-list and MatrixMarket readers.
//!
//! Edge lists hold one edge per line as two whitespace separated node ids
//! with an optional weight; lines starting with `#` or `%` are comments.
//! Node ids may be arbitrary tokens. When every id is an integer the ids are
//! remapped to `0..n` in ascending numeric order, otherwise in order of first
//! appearance. MatrixMarket input must be `coordinate` with a `pattern`,
//! `real` or `integer` field and `symmetric` or `general` symmetry.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    EdgeList,
    MatrixMarket,
}

impl Format {
    /// `.mtx` files are MatrixMarket, everything else an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => Format::MatrixMarket,
            _ => Format::EdgeList,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "edges" => Ok(Format::EdgeList),
            "matrix-market" | "mtx" => Ok(Format::MatrixMarket),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::EdgeList => "edge-list",
            Format::MatrixMarket => "matrix-market",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadOptions {
    /// Read entries as directed arcs and keep the union of both directions.
    pub symmetrise: bool,
    pub drop_self_loops: bool,
    /// Merge repeated edges instead of rejecting them. The largest weight wins.
    pub collapse_multi_edges: bool,
    /// Keep only the `ceil(d * n(n-1)/2)` heaviest edges.
    pub weight_threshold_density: Option<f64>,
}

struct Entry {
    u: usize,
    v: usize,
    weight: Option<f64>,
    line: usize,
}

pub fn load_path(path: &Path, format: Format, opts: &LoadOptions) -> Result<Graph> {
    let file = File::open(path)?;
    load_graph(BufReader::new(file), format, opts)
}

pub fn load_graph<R: BufRead>(reader: R, format: Format, opts: &LoadOptions) -> Result<Graph> {
    if let Some(d) = opts.weight_threshold_density {
        if !(d > 0.0 && d <= 1.0) {
            return Err(GraphError::InvalidParameter(format!(
                "weight threshold density must lie in (0, 1], got {d}"
            )));
        }
    }
    let (n, labels, entries, directed) = match format {
        Format::EdgeList => read_edge_list(reader)?,
        Format::MatrixMarket => read_matrix_market(reader)?,
    };
    if n == 0 {
        return Err(GraphError::validation("graph has no nodes"));
    }

    let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();

    if directed && !opts.symmetrise {
        check_symmetric(&entries)?;
    }
    let as_arcs = directed || opts.symmetrise;
    let mut seen_arcs: HashMap<(usize, usize), usize> = HashMap::new();

    for e in &entries {
        if e.u == e.v {
            if opts.drop_self_loops {
                continue;
            }
            return Err(GraphError::Validation(format!(
                "line {}: self-loop on node '{}'",
                e.line, labels[e.u]
            )));
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        let w = e.weight.unwrap_or(1.0);
        let repeated = if as_arcs {
            // (u, v) and (v, u) are the two halves of one edge; only a
            // repeated arc in the same direction counts as a multi-edge.
            seen_arcs.insert((e.u, e.v), e.line).is_some()
        } else {
            weights.contains_key(&key)
        };
        if repeated && !opts.collapse_multi_edges {
            return Err(GraphError::Validation(format!(
                "line {}: repeated edge ('{}', '{}'); pass the collapse option to merge multi-edges",
                e.line, labels[key.0], labels[key.1]
            )));
        }
        match weights.get_mut(&key) {
            Some(existing) => *existing = existing.max(w),
            None => {
                weights.insert(key, w);
                pairs.push(key);
            }
        }
    }

    if let Some(d) = opts.weight_threshold_density {
        let quota = density_quota(d, n);
        pairs.sort_by(|a, b| weights[b].total_cmp(&weights[a]).then(a.cmp(b)));
        pairs.truncate(quota);
    }

    if pairs.is_empty() {
        return Err(GraphError::validation("graph has no edges"));
    }
    Graph::from_edges(n, pairs)?.with_labels(labels)
}

/// `ceil(d * n(n-1)/2)`, tolerant of floating-point noise in the product.
pub fn density_quota(d: f64, n: usize) -> usize {
    let pairs = (n as f64) * (n as f64 - 1.0) / 2.0;
    let x = d * pairs;
    let r = x.round();
    if (x - r).abs() < 1e-9 * pairs.max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

fn check_symmetric(entries: &[Entry]) -> Result<()> {
    let mut arcs: HashMap<(usize, usize), usize> = HashMap::new();
    for e in entries {
        arcs.insert((e.u, e.v), e.line);
    }
    for e in entries {
        if e.u != e.v && !arcs.contains_key(&(e.v, e.u)) {
            return Err(GraphError::Validation(format!(
                "line {}: entry has no reverse entry; the input is asymmetric, pass the symmetrise option",
                e.line
            )));
        }
    }
    Ok(())
}

type Parsed = (usize, Vec<String>, Vec<Entry>, bool);

fn read_edge_list<R: BufRead>(reader: R) -> Result<Parsed> {
    let mut raw: Vec<(String, String, Option<f64>, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let weight = match tokens.len() {
            2 => None,
            3 => Some(parse_weight(tokens[2], line_no)?),
            k => {
                return Err(GraphError::parse(
                    line_no,
                    format!("expected 2 or 3 tokens, found {k}"),
                ))
            }
        };
        raw.push((tokens[0].to_owned(), tokens[1].to_owned(), weight, line_no));
    }

    let numeric: Option<Vec<(i64, i64)>> = raw
        .iter()
        .map(|(a, b, _, _)| Some((a.parse::<i64>().ok()?, b.parse::<i64>().ok()?)))
        .collect();

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    match numeric {
        Some(ids) => {
            let mut all: Vec<i64> = ids.iter().flat_map(|&(a, b)| [a, b]).collect();
            all.sort_unstable();
            all.dedup();
            for id in all {
                index.insert(id.to_string(), labels.len());
                labels.push(id.to_string());
            }
            // normalise tokens such as "007" onto their numeric label
            for (r, (a, b)) in raw.iter_mut().zip(ids) {
                r.0 = a.to_string();
                r.1 = b.to_string();
            }
        }
        None => {
            for (a, b, _, _) in &raw {
                for tok in [a, b] {
                    if !index.contains_key(tok) {
                        index.insert(tok.clone(), labels.len());
                        labels.push(tok.clone());
                    }
                }
            }
        }
    }

    let entries = raw
        .into_iter()
        .map(|(a, b, weight, line)| Entry {
            u: index[&a],
            v: index[&b],
            weight,
            line,
        })
        .collect();
    Ok((labels.len(), labels, entries, false))
}

fn read_matrix_market<R: BufRead>(reader: R) -> Result<Parsed> {
    let mut lines = reader.lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(GraphError::parse(1, "empty input")),
    };
    let fields: Vec<String> = header
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(GraphError::parse(
            1,
            "missing '%%MatrixMarket matrix' header",
        ));
    }
    if fields[2] != "coordinate" {
        return Err(GraphError::parse(
            1,
            "only coordinate matrices are supported",
        ));
    }
    let weighted = match fields[3].as_str() {
        "pattern" => false,
        "real" | "integer" => true,
        other => return Err(GraphError::parse(1, format!("unsupported field '{other}'"))),
    };
    let directed = match fields[4].as_str() {
        "symmetric" => false,
        "general" => true,
        other => {
            return Err(GraphError::parse(
                1,
                format!("unsupported symmetry '{other}'"),
            ))
        }
    };

    let mut size: Option<(usize, usize)> = None;
    let mut entries = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if tokens.len() != 3 {
                    return Err(GraphError::parse(line_no, "expected 'rows cols entries'"));
                }
                let nums: Vec<usize> = tokens
                    .iter()
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| GraphError::parse(line_no, e.to_string()))?;
                if nums[0] != nums[1] {
                    return Err(GraphError::validation(format!(
                        "adjacency matrix must be square, got {}x{}",
                        nums[0], nums[1]
                    )));
                }
                size = Some((nums[0], nums[2]));
            }
            Some((n, _)) => {
                let expected = if weighted { 3 } else { 2 };
                if tokens.len() < expected {
                    return Err(GraphError::parse(
                        line_no,
                        format!("expected {expected} tokens, found {}", tokens.len()),
                    ));
                }
                let mut ij = [0usize; 2];
                for (slot, tok) in ij.iter_mut().zip(&tokens) {
                    let x: usize = tok
                        .parse()
                        .map_err(|_| GraphError::parse(line_no, format!("bad index '{tok}'")))?;
                    if x == 0 || x > n {
                        return Err(GraphError::parse(
                            line_no,
                            format!("index {x} outside 1..={n}"),
                        ));
                    }
                    *slot = x - 1;
                }
                let weight = if weighted {
                    Some(parse_weight(tokens[2], line_no)?)
                } else {
                    None
                };
                entries.push(Entry {
                    u: ij[0],
                    v: ij[1],
                    weight,
                    line: line_no,
                });
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| GraphError::parse(1, "missing size line"))?;
    if entries.len() != nnz {
        return Err(GraphError::validation(format!(
            "size line declares {nnz} entries but {} were read",
            entries.len()
        )));
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    Ok((n, labels, entries, directed))
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    let w: f64 = tok
        .parse()
        .map_err(|_| GraphError::parse(line, format!("bad weight '{tok}'")))?;
    if !w.is_finite() {
        return Err(GraphError::parse(
            line,
            format!("non-finite weight '{tok}'"),
        ));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, opts: &LoadOptions) -> Result<Graph> {
        load_graph(text.as_bytes(), Format::EdgeList, opts)
    }

    fn mtx(text: &str, opts: &LoadOptions) -> Result<Graph> {
        load_graph(text.as_bytes(), Format::MatrixMarket, opts)
    }

    #[test]
    fn path_edge_list() {
        let g = load("0 1\n1 2\n", &LoadOptions::default()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn comments_and_sparse_ids() {
        let g = load(
            "# header\n% other\n10 30\n\n30 20\n",
            &LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(g.labels().unwrap(), &["10", "20", "30"]);
        assert_eq!(g.degrees(), vec![1, 1, 2]);
    }

    #[test]
    fn string_ids_in_first_appearance_order() {
        let g = load("bob alice\nalice carol\n", &LoadOptions::default()).unwrap();
        assert_eq!(g.labels().unwrap(), &["bob", "alice", "carol"]);
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn self_loop_rejected_unless_dropped() {
        let err = load("0 1\n2 2\n", &LoadOptions::default()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let opts = LoadOptions {
            drop_self_loops: true,
            ..Default::default()
        };
        let g = load("0 1\n2 2\n", &opts).unwrap();
        // the node survives as an isolated vertex
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn malformed_line_reports_number() {
        match load("0 1\n1\n", &LoadOptions::default()) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match load("0 1\n1 2 heavy\n", &LoadOptions::default()) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn multi_edges_need_collapse() {
        assert!(load("0 1\n1 0\n", &LoadOptions::default()).is_err());
        let collapse = LoadOptions {
            collapse_multi_edges: true,
            ..Default::default()
        };
        assert_eq!(load("0 1\n1 0\n", &collapse).unwrap().edge_count(), 1);
        let sym = LoadOptions {
            symmetrise: true,
            ..Default::default()
        };
        assert_eq!(load("0 1\n1 0\n1 2\n", &sym).unwrap().edge_count(), 2);
        assert!(load("0 1\n0 1\n", &sym).is_err());
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(
            load("# nothing\n", &LoadOptions::default()),
            Err(GraphError::Validation(_))
        ));
    }

    #[test]
    fn density_binarisation_keeps_heaviest_with_lexicographic_ties() {
        // 5 nodes -> 10 pairs; d = 0.3 keeps 3 edges
        let text = "0 1 0.5\n0 2 0.9\n1 2 0.9\n2 3 0.9\n3 4 0.1\n1 3 0.2\n";
        let opts = LoadOptions {
            weight_threshold_density: Some(0.3),
            ..Default::default()
        };
        let g = load(text, &opts).unwrap();
        assert_eq!(g.node_count(), 5);
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(0, 2), (1, 2), (2, 3)]);

        let opts = LoadOptions {
            weight_threshold_density: Some(0.2),
            ..Default::default()
        };
        let e: Vec<_> = load(text, &opts).unwrap().edges().collect();
        assert_eq!(e, vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn density_quota_is_exact_on_round_products() {
        assert_eq!(density_quota(0.2, 55), 297);
        assert_eq!(density_quota(0.1, 34), 57); // 56.1 -> 57
        assert_eq!(density_quota(1.0, 4), 6);
    }

    #[test]
    fn matrix_market_symmetric_pattern() {
        let text =
            "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n4 4 3\n2 1\n3 2\n4 3\n";
        let g = mtx(text, &LoadOptions::default()).unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 2, 1]);
        assert_eq!(g.labels().unwrap()[0], "1");
    }

    #[test]
    fn matrix_market_general_requires_symmetry_or_flag() {
        let asym = "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1.0\n2 3 1.0\n";
        assert!(matches!(
            mtx(asym, &LoadOptions::default()),
            Err(GraphError::Validation(_))
        ));
        let sym = LoadOptions {
            symmetrise: true,
            ..Default::default()
        };
        assert_eq!(mtx(asym, &sym).unwrap().edge_count(), 2);

        let both = "%%MatrixMarket matrix coordinate pattern general\n3 3 4\n1 2\n2 1\n2 3\n3 2\n";
        assert_eq!(mtx(both, &LoadOptions::default()).unwrap().edge_count(), 2);
    }

    #[test]
    fn matrix_market_keeps_isolated_nodes() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n5 5 1\n2 1\n";
        let g = mtx(text, &LoadOptions::default()).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.component_count(), 4);
    }

    #[test]
    fn matrix_market_errors() {
        assert!(mtx("0 1\n", &LoadOptions::default()).is_err());
        let bad_count = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n";
        assert!(mtx(bad_count, &LoadOptions::default()).is_err());
        let bad_index = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n4 1\n";
        assert!(matches!(
            mtx(bad_index, &LoadOptions::default()),
            Err(GraphError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn write_then_read_round_trips() {
        let g = load("0 1\n1 2\n2 3\n3 0\n0 2\n", &LoadOptions::default()).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let h = load(std::str::from_utf8(&buf).unwrap(), &LoadOptions::default()).unwrap();
        assert_eq!(g, h);

        let mut buf = Vec::new();
        g.write_matrix_market(&mut buf).unwrap();
        let h = mtx(std::str::from_utf8(&buf).unwrap(), &LoadOptions::default()).unwrap();
        assert_eq!(g.degrees(), h.degrees());
        assert_eq!(g.edges().collect::<Vec<_>>(), h.edges().collect::<Vec<_>>());
    }
}
