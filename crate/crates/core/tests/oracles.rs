use std::path::PathBuf;

use nds_core::classical::{assortativity, transitivity};
use nds_core::indices::{
    hierarchical_complexity, hierarchical_complexity_corrected, neighbourhood_organisation,
    neighbourhood_similarity, node_heterogeneity, relative_node_heterogeneity,
};
use nds_core::modularity::{modularity, partition_modularity};
use nds_core::stats::{spearman, wilcoxon_signed_rank, wilcoxon_signed_rank_with, PValueMethod};
use nds_core::wl::{subtree_pattern, verify_equivalence, Unfolding};
use nds_core::{
    degree_class_summaries, load_path, ComplexityScale, Format, Graph, LoadOptions, NdsOptions,
    NdsTable, VarianceMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn karate() -> Graph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/karate.edges");
    load_path(&path, Format::EdgeList, &LoadOptions::default()).unwrap()
}

fn random_graph(seed: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let p: f64 = rng.gen_range(0.02..0.5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

// Naive versions of every sequence index, straight from the definitions.
mod naive {
    use nds_core::Graph;

    pub fn sequence(g: &Graph, i: usize) -> Vec<usize> {
        let mut s: Vec<usize> = g
            .neighbours(i)
            .iter()
            .map(|&j| g.neighbours(j).len())
            .collect();
        s.sort();
        s
    }

    fn var(xs: &[f64], sample: bool) -> f64 {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        if sample {
            ss / (n - 1.0)
        } else {
            ss / n
        }
    }

    pub fn node_heterogeneity(g: &Graph, sample: bool) -> f64 {
        let n = g.node_count();
        let mut total = 0.0;
        for i in 0..n {
            if g.degree(i) > 1 {
                let s: Vec<f64> = sequence(g, i).into_iter().map(|k| k as f64).collect();
                total += var(&s, sample);
            }
        }
        total / n as f64
    }

    pub fn relative_node_heterogeneity(g: &Graph, sample: bool) -> Option<f64> {
        let k: Vec<f64> = g.degrees().into_iter().map(|k| k as f64).collect();
        let vk = var(&k, sample);
        if vk == 0.0 {
            return None;
        }
        Some(node_heterogeneity(g, sample) / vk)
    }

    pub fn similarity(g: &Graph) -> f64 {
        let n = g.node_count();
        let mut matched = 0;
        for i in 0..n {
            if (0..n).any(|j| j != i && sequence(g, j) == sequence(g, i)) {
                matched += 1;
            }
        }
        matched as f64 / n as f64
    }

    /// Degrees held by at least two nodes, ascending, with their members.
    pub fn d2(g: &Graph) -> Vec<(usize, Vec<usize>)> {
        let max = g.degrees().into_iter().max().unwrap_or(0);
        (1..=max)
            .map(|p| {
                (
                    p,
                    (0..g.node_count())
                        .filter(|&i| g.degree(i) == p)
                        .collect::<Vec<_>>(),
                )
            })
            .filter(|(_, members)| members.len() >= 2)
            .collect()
    }

    pub fn omega(g: &Graph, members: &[usize]) -> f64 {
        let q = members.len() as f64;
        let seqs: Vec<Vec<usize>> = members.iter().map(|&i| sequence(g, i)).collect();
        let mut distinct: Vec<&Vec<usize>> = Vec::new();
        for s in &seqs {
            if !distinct.contains(&s) {
                distinct.push(s);
            }
        }
        let counts: Vec<f64> = distinct
            .iter()
            .map(|d| seqs.iter().filter(|s| s == d).count() as f64)
            .collect();
        let ratio = distinct.len() as f64 / q;
        let offset: f64 = counts.iter().map(|c| q - c).sum();
        ratio * offset / (q * (q - 1.0))
    }

    pub fn organisation(g: &Graph) -> Option<f64> {
        let classes = d2(g);
        if classes.is_empty() {
            return None;
        }
        let sum: f64 = classes.iter().map(|(_, m)| omega(g, m)).sum();
        Some(1.0 - sum / classes.len() as f64)
    }

    fn class_term(g: &Graph, p: usize, members: &[usize]) -> f64 {
        let q = members.len() as f64;
        let mut total = 0.0;
        for j in 0..p {
            let col: Vec<f64> = members.iter().map(|&i| sequence(g, i)[j] as f64).collect();
            let mu = col.iter().sum::<f64>() / q;
            total += col.iter().map(|x| (x - mu).powi(2)).sum::<f64>();
        }
        total / (p as f64 * (q - 1.0))
    }

    pub fn complexity(g: &Graph, corrected: bool) -> Option<f64> {
        let classes = d2(g);
        if classes.is_empty() {
            return None;
        }
        let sum: f64 = classes
            .iter()
            .map(|(p, m)| {
                let w = if corrected { omega(g, m) } else { 1.0 };
                w * class_term(g, *p, m)
            })
            .sum();
        Some(sum / classes.len() as f64)
    }
}

fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).abs() <= tol,
        (None, None) => true,
        _ => false,
    }
}

#[test]
fn sequence_indices_match_naive_definitions() {
    for seed in 0..100 {
        let g = random_graph(seed, 100);
        let t = NdsTable::new(&g);
        let summaries = degree_class_summaries(&t);
        for (mode, sample) in [
            (VarianceMode::Population, false),
            (VarianceMode::Sample, true),
        ] {
            let opts = NdsOptions {
                variance_mode: mode,
                complexity_scale: ComplexityScale::Unscaled,
                ..Default::default()
            };
            let vn = node_heterogeneity(&t, &opts);
            assert!(
                (vn - naive::node_heterogeneity(&g, sample)).abs() < 1e-12,
                "seed {seed}"
            );
            assert!(close(
                relative_node_heterogeneity(&t, &opts),
                naive::relative_node_heterogeneity(&g, sample),
                1e-12
            ));
        }
        let opts = NdsOptions {
            complexity_scale: ComplexityScale::Unscaled,
            ..Default::default()
        };
        assert!((neighbourhood_similarity(&t) - naive::similarity(&g)).abs() < 1e-12);
        assert!(close(
            neighbourhood_organisation(&summaries),
            naive::organisation(&g),
            1e-12
        ));
        assert!(close(
            hierarchical_complexity(&t, &opts),
            naive::complexity(&g, false),
            1e-12
        ));
        assert!(close(
            hierarchical_complexity_corrected(&t, &summaries, &opts),
            naive::complexity(&g, true),
            1e-12
        ));
        // the per-node scale divides by n
        let n = g.node_count() as f64;
        let scaled = hierarchical_complexity(&t, &NdsOptions::default());
        assert!(close(
            scaled,
            naive::complexity(&g, false).map(|r| r / n),
            1e-12
        ));
    }
}

#[test]
fn karate_counts() {
    let g = karate();
    assert_eq!((g.node_count(), g.edge_count()), (34, 78));
    let d = g.degrees();
    assert_eq!(d.iter().max(), Some(&17));
    assert_eq!(d.iter().min(), Some(&1));
    assert_eq!(d.iter().sum::<usize>(), 156);
}

#[test]
fn karate_table_values() {
    let g = karate();
    let t = NdsTable::new(&g);
    let s = degree_class_summaries(&t);
    let opts = NdsOptions::default();
    let within = |x: f64, target: f64| (x - target).abs() <= 1e-3;
    assert!(within(neighbourhood_similarity(&t), 0.324));
    assert!(within(neighbourhood_organisation(&s).unwrap(), 0.279));
    assert!(within(
        relative_node_heterogeneity(&t, &opts).unwrap(),
        1.714
    ));
    assert!(within(hierarchical_complexity(&t, &opts).unwrap(), 0.296));
    assert!(within(
        hierarchical_complexity_corrected(&t, &s, &opts).unwrap(),
        0.190
    ));
}

#[test]
fn transitivity_matches_triple_scan() {
    for seed in 0..50 {
        let g = random_graph(1000 + seed, 30);
        let n = g.node_count();
        let (mut closed, mut triples) = (0usize, 0usize);
        for centre in 0..n {
            for a in 0..n {
                for b in a + 1..n {
                    if a != centre && b != centre && g.has_edge(centre, a) && g.has_edge(centre, b)
                    {
                        triples += 1;
                        if g.has_edge(a, b) {
                            closed += 1;
                        }
                    }
                }
            }
        }
        let expected = (triples > 0).then(|| closed as f64 / triples as f64);
        assert!(close(transitivity(&g), expected, 1e-12), "seed {seed}");
    }
}

#[test]
fn assortativity_matches_edge_pair_correlation() {
    for seed in 0..50 {
        let g = random_graph(2000 + seed, 40);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (u, v) in g.edges() {
            let (du, dv) = (g.degree(u) as f64, g.degree(v) as f64);
            xs.extend([du, dv]);
            ys.extend([dv, du]);
        }
        if xs.len() < 4 {
            continue;
        }
        let m = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>().sqrt();
        let sy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum::<f64>().sqrt();
        let expected = (sx > 1e-9).then(|| cov / (sx * sy));
        assert!(close(assortativity(&g), expected, 1e-10), "seed {seed}");
    }
}

#[test]
fn modularity_near_exhaustive_bipartition() {
    let mut edges = Vec::new();
    for base in [0, 5] {
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((base + u, base + v));
            }
        }
    }
    edges.push((4, 5));
    let g = Graph::from_edges(10, edges).unwrap();
    let mut best = f64::MIN;
    for mask in 0u32..(1 << 10) {
        let membership: Vec<usize> = (0..10).map(|i| ((mask >> i) & 1) as usize).collect();
        best = best.max(partition_modularity(&g, &membership).unwrap());
    }
    let q = modularity(&g, 5).unwrap();
    assert!((q - best).abs() <= 0.02, "heuristic {q}, exhaustive {best}");
}

#[test]
fn spearman_hand_computed() {
    let some = |v: &[f64]| v.iter().copied().map(Some).collect::<Vec<_>>();
    // ranks x = 1, 2.5, 2.5, 4, 5.5, 5.5 and y = 2, 1, 3.5, 3.5, 6, 5
    let rho = spearman(
        &some(&[1., 2., 2., 3., 4., 4.]),
        &some(&[2., 1., 3., 3., 5., 4.]),
    )
    .unwrap();
    assert!((rho - 0.850_841_043_487_808_2).abs() < 1e-12, "{rho}");
    // no ties: 1 − 6·4 / (5·24)
    let rho = spearman(
        &some(&[10., 20., 30., 40., 50.]),
        &some(&[1., 3., 2., 5., 4.]),
    )
    .unwrap();
    assert!((rho - 0.8).abs() < 1e-12, "{rho}");
    let rho = spearman(
        &some(&[3., 3., 3., 1., 2., 5., 5.]),
        &some(&[7., 1., 4., 4., 4., 2., 9.]),
    )
    .unwrap();
    assert!((rho - 0.097_091_954_672_577_17).abs() < 1e-12, "{rho}");
}

#[test]
fn spearman_is_rank_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let x: Vec<Option<f64>> = (0..20).map(|_| Some(rng.gen_range(-5.0..5.0))).collect();
        let y: Vec<Option<f64>> = (0..20).map(|_| Some(rng.gen_range(-5.0..5.0))).collect();
        let fx: Vec<Option<f64>> = x.iter().map(|v| v.map(|v: f64| v.exp())).collect();
        let fy: Vec<Option<f64>> = y.iter().map(|v| v.map(|v| v * v * v + 1.0)).collect();
        let a = spearman(&x, &y).unwrap();
        let b = spearman(&fx, &fy).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}

/// Two-sided p-value by listing every sign assignment of `magnitudes`.
fn enumerated_p(magnitudes: &[f64], signs: u32) -> f64 {
    let n = magnitudes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| magnitudes[a].total_cmp(&magnitudes[b]));
    let mut ranks = vec![0.0; n];
    for &i in &order {
        let less = magnitudes.iter().filter(|&&m| m < magnitudes[i]).count();
        let equal = magnitudes.iter().filter(|&&m| m == magnitudes[i]).count();
        ranks[i] = less as f64 + (equal as f64 + 1.0) / 2.0;
    }
    let w = |pattern: u32| -> f64 {
        (0..n)
            .filter(|&i| pattern >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum()
    };
    let obs = w(signs);
    let all: Vec<f64> = (0..1u32 << n).map(w).collect();
    let lower = all.iter().filter(|&&x| x <= obs + 1e-9).count() as f64;
    let upper = all.iter().filter(|&&x| x >= obs - 1e-9).count() as f64;
    (2.0 * lower.min(upper) / all.len() as f64).min(1.0)
}

#[test]
fn wilcoxon_exact_matches_enumeration() {
    let tied = [1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 4.0, 5.0, 5.0, 6.0];
    for n in 1..=10usize {
        let distinct: Vec<f64> = (1..=n).map(|i| i as f64 * 0.7).collect();
        for magnitudes in [&distinct[..], &tied[..n]] {
            for signs in 0u32..1 << n {
                let x: Vec<f64> = (0..n)
                    .map(|i| {
                        if signs >> i & 1 == 1 {
                            magnitudes[i]
                        } else {
                            -magnitudes[i]
                        }
                    })
                    .collect();
                let t = wilcoxon_signed_rank(&x, &vec![0.0; n]).unwrap();
                assert_eq!(t.method, PValueMethod::Exact);
                let expected = enumerated_p(magnitudes, signs);
                assert!(
                    (t.p_value - expected).abs() < 1e-12,
                    "n {n} signs {signs:b}"
                );
                assert!(
                    (t.effect_size - (t.statistic - t.w_minus) / (t.statistic + t.w_minus)).abs()
                        < 1e-15
                );
            }
        }
    }
}

#[test]
fn wilcoxon_worked_example() {
    // |d| ranks 1..8; the negative differences hold ranks 1 and 3, so
    // W− = 4 and P(W ≤ 4) = 7/256 on each side
    let d = [1.5, -0.5, 2.0, 3.1, -1.2, 4.0, 2.6, 0.8];
    let t = wilcoxon_signed_rank(&d, &[0.0; 8]).unwrap();
    assert_eq!((t.statistic, t.w_minus), (32.0, 4.0));
    assert!((t.p_value - 14.0 / 256.0).abs() < 1e-15);
    assert!((t.effect_size - 28.0 / 36.0).abs() < 1e-15);
}

#[test]
fn wilcoxon_normal_branch_with_ties() {
    let d = [1.0, 1.0, -1.0, 2.0, 2.0, 3.0, -3.0, 4.0];
    let t = wilcoxon_signed_rank_with(&d, &[0.0; 8], Some(PValueMethod::Normal)).unwrap();
    assert!(
        (t.p_value - 0.204_219_270_289_849_2).abs() < 1e-9,
        "{}",
        t.p_value
    );
}

#[test]
fn wilcoxon_branches_agree_at_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..40 {
        let shift = rng.gen_range(-1.0..1.0);
        let x: Vec<f64> = (0..25).map(|_| rng.gen_range(-2.0..2.0) + shift).collect();
        let exact = wilcoxon_signed_rank_with(&x, &[0.0; 25], Some(PValueMethod::Exact)).unwrap();
        let approx = wilcoxon_signed_rank_with(&x, &[0.0; 25], Some(PValueMethod::Normal)).unwrap();
        assert!(
            (exact.p_value - approx.p_value).abs() < 0.01,
            "{} vs {}",
            exact.p_value,
            approx.p_value
        );
    }
}

#[test]
fn subtree_children_equal_sequences() {
    let mut graphs: Vec<Graph> = (0..100).map(|s| random_graph(3000 + s, 50)).collect();
    graphs.push(karate());
    for g in &graphs {
        let t = NdsTable::new(g);
        for u in 0..g.node_count() {
            let p = subtree_pattern(g, u, 2, Unfolding::WithBackEdge).unwrap();
            assert_eq!(p.root_degree, g.degree(u));
            assert_eq!(p.child_degrees, t.sequence(u));
        }
        assert!(verify_equivalence(g, Unfolding::WithBackEdge).holds);
        assert!(verify_equivalence(g, Unfolding::WithoutBackEdge).holds);
    }
}
