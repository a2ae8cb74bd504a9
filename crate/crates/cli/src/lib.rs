//! Command-line workflows over `nds-core`: single-network analysis, null
//! comparisons, batch corpora, correlation matrices, temporal series and
//! graph generation.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

use args::{Cli, Command};
use commands::Settings;
use error::Result;

pub fn run(cli: &Cli) -> Result<()> {
    let s = Settings::from(&cli.global);
    match &cli.command {
        Command::Analyze { path, load, out } => commands::analyze(path, load, out, &s),
        Command::Nullcompare { path, load, out } => commands::nullcompare(path, load, out, &s),
        Command::Batch {
            manifest,
            parallelism,
            keep_going,
            out,
        } => commands::batch(manifest, *parallelism, *keep_going, out, &s),
        Command::Correlate {
            input,
            absolute,
            out,
        } => commands::correlate(input, *absolute, out.as_deref()),
        Command::Temporal {
            dir,
            indices,
            parallelism,
            keep_going,
            load,
            out,
        } => commands::temporal(
            dir,
            indices,
            *parallelism,
            *keep_going,
            load,
            out.as_deref(),
            &s,
        ),
        Command::Generate { model, out, format } => {
            commands::generate_graph(model, out.as_deref(), (*format).into(), &s)
        }
    }
}
