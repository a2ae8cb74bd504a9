//! Per-network index reports and degree-preserving null ensembles.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{classical_indices, ClassicalIndexSet};
use crate::error::{GraphError, Result};
use crate::graph::Graph;
use crate::indices::{nds_indices, NdsIndexSet, NdsOptions};
use crate::io::LoadOptions;
use crate::nds::NdsTable;
use crate::rewire::{rewire, RewireConfig};

/// The scalar indices a report carries, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Index {
    S,
    Vn,
    VnHat,
    Omega,
    R,
    ROmega,
    C,
    VHat,
    L,
    Assortativity,
    Modularity,
}

impl Index {
    pub const ALL: [Index; 11] = [
        Index::S,
        Index::Vn,
        Index::VnHat,
        Index::Omega,
        Index::R,
        Index::ROmega,
        Index::C,
        Index::VHat,
        Index::L,
        Index::Assortativity,
        Index::Modularity,
    ];

    pub const NDS: [Index; 6] = [
        Index::S,
        Index::Vn,
        Index::VnHat,
        Index::Omega,
        Index::R,
        Index::ROmega,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Index::S => "S",
            Index::Vn => "V_n",
            Index::VnHat => "V_n_hat",
            Index::Omega => "Omega",
            Index::R => "R",
            Index::ROmega => "R_Omega",
            Index::C => "C",
            Index::VHat => "v_hat",
            Index::L => "L",
            Index::Assortativity => "r",
            Index::Modularity => "Q",
        }
    }

    pub fn is_classical(self) -> bool {
        !Index::NDS.contains(&self)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Index {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Index::ALL
            .into_iter()
            .find(|i| i.label() == s)
            .ok_or_else(|| format!("unknown index '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub nds: NdsOptions,
    /// Seed for the modularity heuristic.
    pub seed: u64,
    /// Compute the classical indices; when false they are reported as null.
    pub classical: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            nds: NdsOptions::default(),
            seed: 0,
            classical: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub source: Option<String>,
    pub format: Option<String>,
    pub load_options: Option<LoadOptions>,
    pub seed: u64,
    pub nds_options: NdsOptions,
    pub rewire: Option<RewireProvenance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RewireProvenance {
    pub seed: u64,
    pub target_swaps: usize,
    pub swaps: usize,
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub network_id: String,
    pub n: usize,
    pub m: usize,
    /// `2m / (n(n−1))`, undefined below two nodes.
    pub density: Option<f64>,
    pub components: usize,
    pub nds: NdsIndexSet,
    pub classical: ClassicalIndexSet,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

impl IndexReport {
    pub fn compute(network_id: impl Into<String>, g: &Graph, cfg: &ReportConfig) -> Self {
        let table = NdsTable::new(g);
        let nds = nds_indices(&table, &cfg.nds);
        let classical = if cfg.classical {
            classical_indices(g, cfg.nds.variance_mode, cfg.seed)
        } else {
            ClassicalIndexSet::default()
        };
        let n = g.node_count();
        let components = g.component_count();

        let mut warnings = Vec::new();
        if nds.heterogeneity_contributors == 0 {
            warnings.push("no node has degree above one; V_n reported as 0".to_string());
        }
        if nds.relative_node_heterogeneity.is_none() {
            warnings.push("degree variance is zero; V_n_hat undefined".to_string());
        }
        if nds.organisation.is_none() {
            warnings.push(
                "no positive degree is shared by two nodes; Omega, R, R_Omega undefined"
                    .to_string(),
            );
        }
        if components > 1 {
            warnings.push(format!(
                "graph has {components} components; L averages finite distances only"
            ));
        }

        IndexReport {
            network_id: network_id.into(),
            n,
            m: g.edge_count(),
            density: (n >= 2).then(|| g.density()),
            components,
            nds,
            classical,
            warnings,
            provenance: Provenance {
                seed: cfg.seed,
                nds_options: cfg.nds,
                ..Provenance::default()
            },
        }
    }

    pub fn value(&self, index: Index) -> Option<f64> {
        match index {
            Index::S => Some(self.nds.similarity),
            Index::Vn => Some(self.nds.node_heterogeneity),
            Index::VnHat => self.nds.relative_node_heterogeneity,
            Index::Omega => self.nds.organisation,
            Index::R => self.nds.complexity,
            Index::ROmega => self.nds.complexity_corrected,
            Index::C => self.classical.transitivity,
            Index::VHat => self.classical.degree_variance_normalised,
            Index::L => self.classical.path_length,
            Index::Assortativity => self.classical.assortativity,
            Index::Modularity => self.classical.modularity,
        }
    }

    /// True when at least one index has a value.
    pub fn any_defined(&self) -> bool {
        Index::ALL.iter().any(|&i| self.value(i).is_some())
    }
}

/// SplitMix64 finaliser.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `i`-th derived stream of `seed`.
pub fn mix(seed: u64, i: u64) -> u64 {
    splitmix64(seed ^ splitmix64(i))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSummary {
    pub index: Index,
    pub label: &'static str,
    /// Realisations where the index was defined.
    pub defined: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation; undefined below two values.
    pub sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullEnsemble {
    pub realizations: usize,
    pub reports: Vec<IndexReport>,
    pub summary: Vec<IndexSummary>,
    /// Realisations whose rewiring stopped short of the swap quota.
    pub incomplete_rewires: usize,
}

impl NullEnsemble {
    pub fn mean(&self, index: Index) -> Option<f64> {
        self.summary.iter().find(|s| s.index == index)?.mean
    }

    pub fn sd(&self, index: Index) -> Option<f64> {
        self.summary.iter().find(|s| s.index == index)?.sd
    }
}

pub fn summarise(reports: &[IndexReport], indices: &[Index]) -> Vec<IndexSummary> {
    indices
        .iter()
        .map(|&index| {
            let values: Vec<f64> = reports.iter().filter_map(|r| r.value(index)).collect();
            let k = values.len();
            let mean = (k > 0).then(|| values.iter().sum::<f64>() / k as f64);
            let sd = mean.filter(|_| k >= 2).map(|mu| {
                let ss: f64 = values.iter().map(|x| (x - mu) * (x - mu)).sum();
                (ss / (k - 1) as f64).sqrt()
            });
            IndexSummary {
                index,
                label: index.label(),
                defined: k,
                mean,
                sd,
            }
        })
        .collect()
}

/// Scores `count` degree-preserving randomisations of `g` on `indices`.
///
/// Realisation `i` is rewired with seed `mix(rewire.seed, i)`; realisations
/// run in parallel and are collected in index order. Classical indices are
/// only computed when one of them is selected.
pub fn ensemble(
    g: &Graph,
    count: usize,
    rewire_cfg: &RewireConfig,
    report_cfg: &ReportConfig,
    indices: &[Index],
) -> Result<NullEnsemble> {
    if count == 0 {
        return Err(GraphError::InvalidParameter(
            "ensemble needs at least one realisation".into(),
        ));
    }
    let cfg = ReportConfig {
        classical: report_cfg.classical && indices.iter().any(|i| i.is_classical()),
        ..*report_cfg
    };
    let reports = (0..count)
        .into_par_iter()
        .map(|i| {
            let seed = mix(rewire_cfg.seed, i as u64);
            let rewired = rewire(g, &rewire_cfg.with_seed(seed))?;
            let mut report = IndexReport::compute(format!("null-{i}"), &rewired.graph, &cfg);
            if !rewired.complete() {
                report.warnings.push(format!(
                    "rewiring reached {} of {} swaps",
                    rewired.swaps, rewired.target_swaps
                ));
            }
            report.provenance.rewire = Some(RewireProvenance {
                seed,
                target_swaps: rewired.target_swaps,
                swaps: rewired.swaps,
                attempts: rewired.attempts,
            });
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    let incomplete_rewires = reports
        .iter()
        .filter(|r| {
            r.provenance
                .rewire
                .is_some_and(|p| p.swaps < p.target_swaps)
        })
        .count();
    Ok(NullEnsemble {
        realizations: count,
        summary: summarise(&reports, indices),
        reports,
        incomplete_rewires,
    })
}
