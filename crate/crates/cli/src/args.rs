use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nds_core::{Format, LoadOptions, VarianceMode};

#[derive(Debug, Parser)]
#[command(
    name = "nds",
    version,
    about = "Neighbourhood degree sequence indices for networks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Variance convention for sequence and degree variances.
    #[arg(long, global = true, value_enum, default_value_t = VarianceArg::Sample)]
    pub variance_mode: VarianceArg,

    /// Null-model realisations per network.
    #[arg(long, global = true, default_value_t = 10)]
    pub ensemble_count: usize,

    /// Master seed for rewiring, generators and the modularity heuristic.
    #[arg(long, global = true, env = "NDS_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Successful double edge swaps per edge when rewiring.
    #[arg(long, global = true, default_value_t = 10)]
    pub swaps_per_edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarianceArg {
    Population,
    Sample,
}

impl From<VarianceArg> for VarianceMode {
    fn from(v: VarianceArg) -> Self {
        match v {
            VarianceArg::Population => VarianceMode::Population,
            VarianceArg::Sample => VarianceMode::Sample,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    EdgeList,
    MatrixMarket,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::EdgeList => Format::EdgeList,
            FormatArg::MatrixMarket => Format::MatrixMarket,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LoadArgs {
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,

    /// Treat entries as directed arcs and keep their undirected union.
    #[arg(long)]
    pub symmetrise: bool,

    #[arg(long)]
    pub drop_self_loops: bool,

    /// Merge repeated edges instead of rejecting the input.
    #[arg(long)]
    pub collapse_multi_edges: bool,

    /// Keep only the heaviest edges, up to this fraction of all node pairs.
    #[arg(long, value_name = "FRACTION")]
    pub density: Option<f64>,
}

impl LoadArgs {
    pub fn options(&self) -> LoadOptions {
        LoadOptions {
            symmetrise: self.symmetrise,
            drop_self_loops: self.drop_self_loops,
            collapse_multi_edges: self.collapse_multi_edges,
            weight_threshold_density: self.density,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the JSON result here.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,

    /// Write the CSV result here.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every index for one network.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        load: LoadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare one network with its degree-preserving null ensemble.
    Nullcompare {
        path: PathBuf,
        #[command(flatten)]
        load: LoadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Analyse every network listed in a manifest.
    Batch {
        /// One network per line: `path [format] [id]`; `#` starts a comment.
        manifest: PathBuf,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Record failing entries and continue.
        #[arg(long)]
        keep_going: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spearman correlation matrix of the index columns of a batch table.
    Correlate {
        /// Batch output, CSV or JSON.
        input: PathBuf,
        /// Report absolute correlations.
        #[arg(long)]
        absolute: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Index series over a directory of per-timestamp edge lists.
    Temporal {
        dir: PathBuf,
        /// Indices to track, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "Omega")]
        indices: Vec<String>,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Skip unreadable timestamps with a warning.
        #[arg(long)]
        keep_going: bool,
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Sample a random graph and write it out.
    Generate {
        #[command(subcommand)]
        model: ModelArgs,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = FormatArg::EdgeList)]
        format: FormatArg,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum ModelArgs {
    ErdosRenyi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    RandomGeometric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    WattsStrogatz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        beta: f64,
    },
    BarabasiAlbert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m0: usize,
        #[arg(long)]
        m_attach: usize,
    },
}

impl From<&ModelArgs> for nds_core::Model {
    fn from(m: &ModelArgs) -> Self {
        use nds_core::Model;
        match *m {
            ModelArgs::ErdosRenyi { n, p } => Model::ErdosRenyi { n, p },
            ModelArgs::RandomGeometric { n, radius, dim } => {
                Model::RandomGeometric { n, radius, dim }
            }
            ModelArgs::WattsStrogatz { n, k, beta } => Model::WattsStrogatz { n, k, beta },
            ModelArgs::BarabasiAlbert { n, m0, m_attach } => {
                Model::BarabasiAlbert { n, m0, m_attach }
            }
        }
    }
}
