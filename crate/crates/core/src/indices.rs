//! Indices computed from neighbourhood degree sequences: node
//! heterogeneity, neighbourhood similarity, neighbourhood organisation,
//! hierarchical complexity and its multi-order correction.
//!
//! Undefined values are `None`; they are never folded to zero.

use serde::{Deserialize, Serialize};

use crate::nds::{degree_class_summaries, DegreeClassSummary, NdsTable};

/// Divisor used for every variance in this module.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceMode {
    /// Divide by the number of values.
    Population,
    /// Divide by the number of values minus one.
    #[default]
    Sample,
}

impl std::str::FromStr for VarianceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "population" => Ok(VarianceMode::Population),
            "sample" => Ok(VarianceMode::Sample),
            other => Err(format!("unknown variance mode '{other}'")),
        }
    }
}

/// What the summed sequence variances are divided by in node heterogeneity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeterogeneityDivisor {
    /// All `n` nodes, including those of degree 0 or 1.
    #[default]
    AllNodes,
    /// Only the nodes of degree greater than one.
    Contributing,
}

/// Overall scale applied to hierarchical complexity and its correction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexityScale {
    /// Divide the class average by the node count `n`.
    #[default]
    PerNode,
    /// Report the class average as is.
    Unscaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NdsOptions {
    pub variance_mode: VarianceMode,
    pub heterogeneity_divisor: HeterogeneityDivisor,
    pub complexity_scale: ComplexityScale,
    /// A degree is multi-ordered when `1 < |σ_p| <= threshold * q_p`.
    pub multi_order_threshold: f64,
}

impl Default for NdsOptions {
    fn default() -> Self {
        NdsOptions {
            variance_mode: VarianceMode::default(),
            heterogeneity_divisor: HeterogeneityDivisor::default(),
            complexity_scale: ComplexityScale::default(),
            multi_order_threshold: 0.5,
        }
    }
}

/// Every sequence-based index of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NdsIndexSet {
    #[serde(rename = "S")]
    pub similarity: f64,
    #[serde(rename = "V_n")]
    pub node_heterogeneity: f64,
    #[serde(rename = "V_n_hat")]
    pub relative_node_heterogeneity: Option<f64>,
    #[serde(rename = "Omega")]
    pub organisation: Option<f64>,
    #[serde(rename = "R")]
    pub complexity: Option<f64>,
    #[serde(rename = "R_Omega")]
    pub complexity_corrected: Option<f64>,
    pub multi_ordered_degrees: Vec<usize>,
    /// Nodes of degree above one, i.e. those whose variance enters `V_n`.
    pub heterogeneity_contributors: usize,
    pub per_degree: Vec<DegreeClassSummary>,
}

pub(crate) fn variance<I>(values: I, mode: VarianceMode) -> Option<f64>
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let it = values.into_iter();
    let (count, sum) = it.clone().fold((0usize, 0.0), |(c, s), x| (c + 1, s + x));
    let divisor = match mode {
        VarianceMode::Population => count,
        VarianceMode::Sample => count.checked_sub(1)?,
    };
    if divisor == 0 {
        return None;
    }
    let mean = sum / count as f64;
    let ss: f64 = it.map(|x| (x - mean) * (x - mean)).sum();
    Some(ss / divisor as f64)
}

fn sequence_variance(seq: &[usize], mode: VarianceMode) -> f64 {
    variance(seq.iter().map(|&k| k as f64), mode).unwrap_or(0.0)
}

/// Summed variance of the sequences of nodes with degree above one, and how
/// many such nodes there are.
fn summed_sequence_variance(t: &NdsTable, mode: VarianceMode) -> (f64, usize) {
    (0..t.node_count())
        .filter(|&i| t.degree(i) > 1)
        .fold((0.0, 0), |(s, c), i| {
            (s + sequence_variance(t.sequence(i), mode), c + 1)
        })
}

/// Average variance of neighbourhood degree sequences over nodes of degree
/// greater than one. Returns 0 when no such node exists; callers that care
/// should check [`NdsIndexSet::heterogeneity_contributors`].
pub fn node_heterogeneity(t: &NdsTable, opts: &NdsOptions) -> f64 {
    let (sum, contributors) = summed_sequence_variance(t, opts.variance_mode);
    if contributors == 0 {
        return 0.0;
    }
    let divisor = match opts.heterogeneity_divisor {
        HeterogeneityDivisor::AllNodes => t.node_count(),
        HeterogeneityDivisor::Contributing => contributors,
    };
    sum / divisor as f64
}

/// Node heterogeneity over the degree variance, with the same variance
/// convention for both. Undefined when the degree variance is zero.
pub fn relative_node_heterogeneity(t: &NdsTable, opts: &NdsOptions) -> Option<f64> {
    let degree_var = variance(
        (0..t.node_count()).map(|i| t.degree(i) as f64),
        opts.variance_mode,
    )?;
    if degree_var <= 0.0 {
        return None;
    }
    Some(node_heterogeneity(t, opts) / degree_var)
}

/// Fraction of nodes whose sequence is shared by at least one other node.
pub fn neighbourhood_similarity(t: &NdsTable) -> f64 {
    let n = t.node_count();
    if n == 0 {
        return 0.0;
    }
    let matched = t.has_duplicate().into_iter().filter(|&d| d).count();
    matched as f64 / n as f64
}

/// One minus the mean multi-orderedness score over degrees held by at
/// least two nodes.
pub fn neighbourhood_organisation(summaries: &[DegreeClassSummary]) -> Option<f64> {
    let (sum, count) = summaries
        .iter()
        .filter(|s| s.in_d2())
        .fold((0.0, 0usize), |(s, c), class| {
            (s + class.omega.unwrap_or(0.0), c + 1)
        });
    if count == 0 {
        return None;
    }
    Some(1.0 - sum / count as f64)
}

/// Per-class complexity terms `Σ_j Σ_i (s_i(j) − μ(j))² / (p (q_p − 1))`
/// for every degree in D₂, ascending by degree.
pub(crate) fn class_complexity_terms(t: &NdsTable) -> Vec<(usize, f64)> {
    t.degree_classes()
        .into_iter()
        .filter(|(p, nodes)| *p > 0 && nodes.len() >= 2)
        .map(|(p, nodes)| {
            let q = nodes.len() as f64;
            let mut means = vec![0.0; p];
            for &i in &nodes {
                for (m, &k) in means.iter_mut().zip(t.sequence(i)) {
                    *m += k as f64;
                }
            }
            means.iter_mut().for_each(|m| *m /= q);
            let ss: f64 = nodes
                .iter()
                .map(|&i| {
                    t.sequence(i)
                        .iter()
                        .zip(&means)
                        .map(|(&k, &m)| (k as f64 - m) * (k as f64 - m))
                        .sum::<f64>()
                })
                .sum();
            (p, ss / (p as f64 * (q - 1.0)))
        })
        .collect()
}

fn complexity_scale(t: &NdsTable, opts: &NdsOptions) -> f64 {
    match opts.complexity_scale {
        ComplexityScale::PerNode => t.node_count() as f64,
        ComplexityScale::Unscaled => 1.0,
    }
}

/// Mean element-wise variance of equal-length sequences over D₂.
pub fn hierarchical_complexity(t: &NdsTable, opts: &NdsOptions) -> Option<f64> {
    let terms = class_complexity_terms(t);
    if terms.is_empty() {
        return None;
    }
    let sum: f64 = terms.iter().map(|&(_, term)| term).sum();
    Some(sum / terms.len() as f64 / complexity_scale(t, opts))
}

/// Hierarchical complexity with each degree's term weighted by its ω_p.
pub fn hierarchical_complexity_corrected(
    t: &NdsTable,
    summaries: &[DegreeClassSummary],
    opts: &NdsOptions,
) -> Option<f64> {
    let terms = class_complexity_terms(t);
    if terms.is_empty() {
        return None;
    }
    let mut sum = 0.0;
    for &(p, term) in &terms {
        let omega = summaries
            .iter()
            .find(|s| s.degree == p)
            .and_then(|s| s.omega)
            .unwrap_or(0.0);
        sum += omega * term;
    }
    Some(sum / terms.len() as f64 / complexity_scale(t, opts))
}

/// Degrees whose class splits into more than one but at most
/// `threshold * q_p` distinct sequences.
pub fn multi_ordered_degrees(summaries: &[DegreeClassSummary], threshold: f64) -> Vec<usize> {
    summaries
        .iter()
        .filter(|s| {
            let distinct = s.distinct();
            distinct > 1 && distinct as f64 <= threshold * s.class_size as f64
        })
        .map(|s| s.degree)
        .collect()
}

/// All sequence-based indices at once.
pub fn nds_indices(t: &NdsTable, opts: &NdsOptions) -> NdsIndexSet {
    let per_degree = degree_class_summaries(t);
    let (_, contributors) = summed_sequence_variance(t, opts.variance_mode);
    NdsIndexSet {
        similarity: neighbourhood_similarity(t),
        node_heterogeneity: node_heterogeneity(t, opts),
        relative_node_heterogeneity: relative_node_heterogeneity(t, opts),
        organisation: neighbourhood_organisation(&per_degree),
        complexity: hierarchical_complexity(t, opts),
        complexity_corrected: hierarchical_complexity_corrected(t, &per_degree, opts),
        multi_ordered_degrees: multi_ordered_degrees(&per_degree, opts.multi_order_threshold),
        heterogeneity_contributors: contributors,
        per_degree,
    }
}
