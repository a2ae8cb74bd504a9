//! Neighbourhood degree sequence indices for undirected simple graphs,
//! together with classical network indices, degree-preserving null
//! ensembles, random graph generators and rank statistics.

pub mod classical;
pub mod error;
pub mod generators;
pub mod graph;
pub mod indices;
pub mod io;
pub mod modularity;
pub mod nds;
pub mod report;
pub mod rewire;
pub mod stats;
pub mod wl;

pub use classical::{classical_indices, ClassicalIndexSet};
pub use error::{GraphError, Result};
pub use generators::{generate, Model};
pub use graph::Graph;
pub use indices::{
    nds_indices, ComplexityScale, HeterogeneityDivisor, NdsIndexSet, NdsOptions, VarianceMode,
};
pub use io::{load_graph, load_path, Format, LoadOptions};
pub use nds::{degree_class_summaries, DegreeClassSummary, NdsTable};
pub use report::{ensemble, mix, Index, IndexReport, NullEnsemble, ReportConfig};
pub use rewire::{rewire, RewireConfig, Rewired};
