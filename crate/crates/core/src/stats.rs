//! Rank statistics: Spearman correlation and the Wilcoxon signed-rank test.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GraphError, Result};
use crate::report::{Index, IndexReport};

/// Largest number of non-zero pairs for which the exact null distribution
/// is enumerated.
pub const EXACT_LIMIT: usize = 25;

/// 1-based average ranks; tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho over the pairs where both values are defined.
///
/// Undefined when fewer than three pairs remain or either side is
/// constant. Panics if the inputs differ in length.
pub fn spearman(x: &[Option<f64>], y: &[Option<f64>]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "spearman inputs differ in length");
    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter_map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => Some((*a, *b)),
            _ => None,
        })
        .unzip();
    if xs.len() < 3 {
        return None;
    }
    pearson(&average_ranks(&xs), &average_ranks(&ys))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    /// `rho[i][j]`, undefined where the pair has no usable overlap.
    pub rho: Vec<Vec<Option<f64>>>,
    /// Rows supplied, before pairwise deletion.
    pub n_samples: usize,
}

impl CorrelationMatrix {
    /// Spearman matrix of equally long columns, with a unit diagonal.
    pub fn from_columns(labels: Vec<String>, columns: &[Vec<Option<f64>>]) -> Result<Self> {
        if labels.len() != columns.len() {
            return Err(GraphError::InvalidParameter(
                "one label per column required".into(),
            ));
        }
        let n_samples = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n_samples) {
            return Err(GraphError::InvalidParameter(
                "columns differ in length".into(),
            ));
        }
        if n_samples < 3 {
            return Err(GraphError::InvalidParameter(format!(
                "correlation needs at least 3 samples, got {n_samples}"
            )));
        }
        let k = columns.len();
        let mut rho = vec![vec![None; k]; k];
        for i in 0..k {
            rho[i][i] = Some(1.0);
            for j in i + 1..k {
                let r = spearman(&columns[i], &columns[j]);
                rho[i][j] = r;
                rho[j][i] = r;
            }
        }
        Ok(CorrelationMatrix {
            labels,
            rho,
            n_samples,
        })
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        self.rho[i][j]
    }

    pub fn absolute(mut self) -> Self {
        for row in &mut self.rho {
            for v in row.iter_mut().flatten() {
                *v = v.abs();
            }
        }
        self
    }
}

pub fn index_correlation_matrix(
    reports: &[IndexReport],
    indices: &[Index],
) -> Result<CorrelationMatrix> {
    let labels = indices.iter().map(|i| i.label().to_string()).collect();
    let columns: Vec<Vec<Option<f64>>> = indices
        .iter()
        .map(|&i| reports.iter().map(|r| r.value(i)).collect())
        .collect();
    CorrelationMatrix::from_columns(labels, &columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValueMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedTestResult {
    /// Pairs with a non-zero difference.
    pub n_pairs: usize,
    pub zero_differences: usize,
    /// Sum of ranks of positive differences, `W+`.
    pub statistic: f64,
    pub w_minus: f64,
    pub p_value: f64,
    pub method: PValueMethod,
    /// Matched-pairs rank-biserial correlation `(W+ − W−) / (W+ + W−)`.
    pub effect_size: f64,
    /// Tie- and continuity-corrected normal deviate of `W+`.
    pub z: f64,
    pub z_over_sqrt_n: f64,
}

/// Two-sided Wilcoxon signed-rank test of `x − y`.
///
/// Zero differences are dropped before ranking. Up to [`EXACT_LIMIT`]
/// remaining pairs the p-value comes from the exact permutation
/// distribution of the observed (possibly tied) ranks; above it from the
/// normal approximation. Returns `None` when every difference is zero.
/// Panics if the inputs differ in length.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Option<PairedTestResult> {
    wilcoxon_signed_rank_with(x, y, None)
}

/// As [`wilcoxon_signed_rank`], with the p-value method forced when
/// `method` is given.
pub fn wilcoxon_signed_rank_with(
    x: &[f64],
    y: &[f64],
    method: Option<PValueMethod>,
) -> Option<PairedTestResult> {
    assert_eq!(x.len(), y.len(), "paired samples differ in length");
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|&d| d != 0.0).collect();
    let n = nonzero.len();
    if n == 0 {
        return None;
    }
    let ranks = average_ranks(&nonzero.iter().map(|d| d.abs()).collect::<Vec<_>>());
    let w_plus: f64 = nonzero
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let w_minus = total - w_plus;

    let z = normal_deviate(w_plus, n, &ranks);
    let method = method.unwrap_or(if n <= EXACT_LIMIT {
        PValueMethod::Exact
    } else {
        PValueMethod::Normal
    });
    let p_value = match method {
        PValueMethod::Exact => exact_p_value(w_plus, &ranks),
        PValueMethod::Normal => {
            let normal = Normal::new(0.0, 1.0).expect("standard normal");
            (2.0 * normal.cdf(-z.abs())).min(1.0)
        }
    };
    Some(PairedTestResult {
        n_pairs: n,
        zero_differences: diffs.len() - n,
        statistic: w_plus,
        w_minus,
        p_value,
        method,
        effect_size: (w_plus - w_minus) / total,
        z,
        z_over_sqrt_n: z / (n as f64).sqrt(),
    })
}

fn normal_deviate(w_plus: f64, n: usize, ranks: &[f64]) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&r| r == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let diff = w_plus - mean;
    if var <= 0.0 || diff == 0.0 {
        return 0.0;
    }
    (diff - 0.5 * diff.signum()) / var.sqrt()
}

/// Two-sided exact p-value: every sign assignment of the ranks is equally
/// likely under the null. Ranks are doubled so midranks become integers.
fn exact_p_value(w_plus: f64, ranks: &[f64]) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut dist = vec![0.0f64; max + 1];
    dist[0] = 1.0;
    let mut reach = 0;
    for &r in &doubled {
        for w in (0..=reach).rev() {
            if dist[w] > 0.0 {
                dist[w + r] += dist[w];
            }
        }
        reach += r;
    }
    let outcomes = 2f64.powi(ranks.len() as i32);
    let obs = (2.0 * w_plus).round() as usize;
    let lower: f64 = dist[..=obs].iter().sum();
    let upper: f64 = dist[obs..].iter().sum();
    (2.0 * lower.min(upper) / outcomes).min(1.0)
}
