use std::fs;
use std::path::{Path, PathBuf};

use nds_core::report::{summarise, IndexSummary};
use nds_core::stats::CorrelationMatrix;
use nds_core::{
    ensemble, generate, load_path, mix, Format, Graph, Index, IndexReport, LoadOptions, Model,
    NdsOptions, ReportConfig, RewireConfig,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{GlobalArgs, LoadArgs, ModelArgs, OutputArgs};
use crate::error::{CliError, Result};
use crate::output::{
    csv_bytes, emit, error_row, fmt_opt, report_header, report_row, to_json, write_atomic,
};

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub report: ReportConfig,
    pub rewire: RewireConfig,
    pub ensemble_count: usize,
}

impl From<&GlobalArgs> for Settings {
    fn from(g: &GlobalArgs) -> Self {
        Settings {
            report: ReportConfig {
                nds: NdsOptions {
                    variance_mode: g.variance_mode.into(),
                    ..NdsOptions::default()
                },
                seed: g.seed,
                classical: true,
            },
            rewire: RewireConfig {
                swaps_per_edge: g.swaps_per_edge,
                seed: g.seed,
                ..RewireConfig::default()
            },
            ensemble_count: g.ensemble_count,
        }
    }
}

fn network_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load(path: &Path, format: Format, opts: &LoadOptions) -> Result<Graph> {
    load_path(path, format, opts).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn analyse_file(
    path: &Path,
    id: String,
    format: Format,
    opts: &LoadOptions,
    cfg: &ReportConfig,
) -> Result<(Graph, IndexReport)> {
    let g = load(path, format, opts)?;
    let mut report = IndexReport::compute(id, &g, cfg);
    report.provenance.source = Some(path.display().to_string());
    report.provenance.format = Some(format.to_string());
    report.provenance.load_options = Some(opts.clone());
    Ok((g, report))
}

fn thread_pool(parallelism: usize) -> Result<rayon::ThreadPool> {
    if parallelism == 0 {
        return Err(CliError::Input("parallelism must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| CliError::Input(e.to_string()))
}

pub fn analyze(path: &Path, load_args: &LoadArgs, out: &OutputArgs, s: &Settings) -> Result<()> {
    let format = load_args
        .format
        .map(Into::into)
        .unwrap_or(Format::from_path(path));
    let (_, report) = analyse_file(
        path,
        network_id(path),
        format,
        &load_args.options(),
        &s.report,
    )?;
    if out.json.is_none() && out.csv.is_none() {
        emit(None, &to_json(&report)?)?;
    }
    if let Some(p) = &out.json {
        write_atomic(p, &to_json(&report)?)?;
    }
    if let Some(p) = &out.csv {
        write_atomic(p, &csv_bytes(&report_header(), &[report_row(&report)])?)?;
    }
    if !report.any_defined() {
        return Err(CliError::Undefined(format!(
            "no index is defined for {}",
            path.display()
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Comparison {
    pub index: &'static str,
    pub real: Option<f64>,
    pub null_mean: Option<f64>,
    pub null_sd: Option<f64>,
    /// `real − null_mean`.
    pub delta: Option<f64>,
    /// `real (null_mean)` to three decimals.
    pub cell: String,
}

#[derive(Debug, Serialize)]
struct EnsembleSummary {
    realizations: usize,
    incomplete_rewires: usize,
    rewire: RewireConfig,
    summary: Vec<IndexSummary>,
}

#[derive(Debug, Serialize)]
struct NullComparison {
    report: IndexReport,
    ensemble: EnsembleSummary,
    comparison: Vec<Comparison>,
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.3}"))
}

pub fn compare(report: &IndexReport, summary: &[IndexSummary]) -> Vec<Comparison> {
    summary
        .iter()
        .map(|s| {
            let real = report.value(s.index);
            Comparison {
                index: s.label,
                real,
                null_mean: s.mean,
                null_sd: s.sd,
                delta: real.zip(s.mean).map(|(r, m)| r - m),
                cell: format!("{} ({})", cell(real), cell(s.mean)),
            }
        })
        .collect()
}

pub fn nullcompare(
    path: &Path,
    load_args: &LoadArgs,
    out: &OutputArgs,
    s: &Settings,
) -> Result<()> {
    if s.ensemble_count == 0 {
        return Err(CliError::Input("ensemble count must be at least 1".into()));
    }
    let format = load_args
        .format
        .map(Into::into)
        .unwrap_or(Format::from_path(path));
    let (g, report) = analyse_file(
        path,
        network_id(path),
        format,
        &load_args.options(),
        &s.report,
    )?;
    let null = ensemble(&g, s.ensemble_count, &s.rewire, &s.report, &Index::ALL)?;
    let comparison = compare(&report, &null.summary);
    let any_defined = comparison.iter().any(|c| c.real.is_some());
    let result = NullComparison {
        report,
        ensemble: EnsembleSummary {
            realizations: null.realizations,
            incomplete_rewires: null.incomplete_rewires,
            rewire: s.rewire,
            summary: null.summary,
        },
        comparison,
    };
    if let Some(p) = &out.csv {
        let header: Vec<String> = ["index", "real", "null_mean", "null_sd", "delta", "cell"]
            .iter()
            .map(|h| h.to_string())
            .collect();
        let rows: Vec<Vec<String>> = result
            .comparison
            .iter()
            .map(|c| {
                vec![
                    c.index.to_string(),
                    fmt_opt(c.real),
                    fmt_opt(c.null_mean),
                    fmt_opt(c.null_sd),
                    fmt_opt(c.delta),
                    c.cell.clone(),
                ]
            })
            .collect();
        write_atomic(p, &csv_bytes(&header, &rows)?)?;
    }
    match &out.json {
        Some(p) => write_atomic(p, &to_json(&result)?)?,
        None if out.csv.is_none() => emit(None, &to_json(&result)?)?,
        None => {}
    }
    if !any_defined {
        return Err(CliError::Undefined(format!(
            "no index is defined for {}",
            path.display()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub line: usize,
    pub path: PathBuf,
    pub format: Format,
    pub id: String,
}

/// Parses `path [format] [id]` lines; relative paths are taken from the
/// manifest's directory.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() > 3 {
            return Err(CliError::Input(format!(
                "manifest line {}: expected `path [format] [id]`",
                i + 1
            )));
        }
        let path = base.join(tokens[0]);
        let format = match tokens.get(1) {
            Some(f) => f
                .parse()
                .map_err(|e| CliError::Input(format!("manifest line {}: {e}", i + 1)))?,
            None => Format::from_path(&path),
        };
        let id = tokens
            .get(2)
            .map(|s| s.to_string())
            .unwrap_or_else(|| network_id(&path));
        entries.push(ManifestEntry {
            line: i + 1,
            path,
            format,
            id,
        });
    }
    if entries.is_empty() {
        return Err(CliError::Input("manifest lists no networks".into()));
    }
    Ok(entries)
}

#[derive(Debug, Serialize)]
struct BatchEntry<'a> {
    network_id: &'a str,
    source: String,
    report: Option<&'a IndexReport>,
    error: Option<&'a str>,
}

pub fn batch(
    manifest: &Path,
    parallelism: usize,
    keep_going: bool,
    out: &OutputArgs,
    s: &Settings,
) -> Result<()> {
    let text = fs::read_to_string(manifest)
        .map_err(|e| CliError::Input(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base)?;
    let opts = LoadOptions::default();
    let pool = thread_pool(parallelism)?;
    let results: Vec<Result<IndexReport>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                analyse_file(&e.path, e.id.clone(), e.format, &opts, &s.report).map(|(_, r)| r)
            })
            .collect()
    });

    if !keep_going {
        if let Some((e, Err(err))) = entries.iter().zip(&results).find(|(_, r)| r.is_err()) {
            return Err(CliError::Input(format!("manifest line {}: {err}", e.line)));
        }
    }

    let rows: Vec<Vec<String>> = entries
        .iter()
        .zip(&results)
        .map(|(e, r)| match r {
            Ok(report) => report_row(report),
            Err(err) => error_row(&e.id, &e.path.display().to_string(), &err.to_string()),
        })
        .collect();
    let errors: Vec<String> = results
        .iter()
        .map(|r| r.as_ref().err().map(|e| e.to_string()).unwrap_or_default())
        .collect();
    let json_entries: Vec<BatchEntry> = entries
        .iter()
        .zip(&results)
        .zip(&errors)
        .map(|((e, r), err)| BatchEntry {
            network_id: &e.id,
            source: e.path.display().to_string(),
            report: r.as_ref().ok(),
            error: r.is_err().then_some(err.as_str()),
        })
        .collect();

    let csv = csv_bytes(&report_header(), &rows)?;
    match &out.csv {
        Some(p) => write_atomic(p, &csv)?,
        None if out.json.is_none() => emit(None, &csv)?,
        None => {}
    }
    if let Some(p) = &out.json {
        write_atomic(p, &to_json(&json_entries)?)?;
    }

    let failed = results.iter().filter(|r| r.is_err()).count();
    if failed == results.len() {
        return Err(CliError::Input("every manifest entry failed".into()));
    }
    for (e, r) in entries.iter().zip(&results) {
        if let Err(err) = r {
            eprintln!("warning: manifest line {} skipped: {err}", e.line);
        }
    }
    Ok(())
}

/// Index columns of a batch table, in `Index::ALL` order, skipping rows
/// that carry an error.
type Columns = (Vec<String>, Vec<Vec<Option<f64>>>);

fn read_columns(input: &Path) -> Result<Columns> {
    let is_json = input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", input.display()));
    let mut labels = Vec::new();
    let mut columns = Vec::new();
    if is_json {
        let text = fs::read_to_string(input)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let rows = value
            .as_array()
            .ok_or_else(|| bad("expected a JSON array of batch entries".into()))?;
        let reports: Vec<&serde_json::Value> = rows
            .iter()
            .map(|r| r.get("report").unwrap_or(r))
            .filter(|r| !r.is_null())
            .collect();
        for index in Index::ALL {
            let section = if index.is_classical() {
                "classical"
            } else {
                "nds"
            };
            labels.push(index.label().to_string());
            columns.push(
                reports
                    .iter()
                    .map(|r| {
                        r.get(section)
                            .and_then(|s| s.get(index.label()))
                            .and_then(|v| v.as_f64())
                    })
                    .collect(),
            );
        }
    } else {
        let mut reader = csv::Reader::from_path(input)?;
        let header = reader.headers()?.clone();
        let error_col = header.iter().position(|h| h == "error");
        let cols: Vec<(Index, usize)> = Index::ALL
            .iter()
            .filter_map(|&i| header.iter().position(|h| h == i.label()).map(|c| (i, c)))
            .collect();
        if cols.is_empty() {
            return Err(bad("no index columns found".into()));
        }
        let mut data: Vec<Vec<Option<f64>>> = vec![Vec::new(); cols.len()];
        for (row_no, record) in reader.records().enumerate() {
            let record = record?;
            if error_col.is_some_and(|c| record.get(c).is_some_and(|e| !e.is_empty())) {
                continue;
            }
            for (k, &(_, c)) in cols.iter().enumerate() {
                let field = record.get(c).unwrap_or("").trim();
                let v = if field.is_empty() {
                    None
                } else {
                    Some(field.parse::<f64>().map_err(|e| {
                        bad(format!(
                            "row {}: column {}: {e}",
                            row_no + 2,
                            header.get(c).unwrap_or("")
                        ))
                    })?)
                };
                data[k].push(v);
            }
        }
        labels = cols.iter().map(|(i, _)| i.label().to_string()).collect();
        columns = data;
    }
    Ok((labels, columns))
}

pub fn matrix_csv(m: &CorrelationMatrix) -> Result<Vec<u8>> {
    let header: Vec<String> = std::iter::once("index".to_string())
        .chain(m.labels.iter().cloned())
        .collect();
    let rows: Vec<Vec<String>> = m
        .labels
        .iter()
        .zip(&m.rho)
        .map(|(l, row)| {
            std::iter::once(l.clone())
                .chain(row.iter().map(|&v| fmt_opt(v)))
                .collect()
        })
        .collect();
    csv_bytes(&header, &rows)
}

pub fn correlate(input: &Path, absolute: bool, out: Option<&Path>) -> Result<()> {
    let (labels, columns) = read_columns(input)?;
    let mut m = CorrelationMatrix::from_columns(labels, &columns)?;
    if absolute {
        m = m.absolute();
    }
    emit(out, &matrix_csv(&m)?)?;
    let k = m.labels.len();
    let any = (0..k).any(|i| (0..k).any(|j| i != j && m.rho[i][j].is_some()));
    if !any {
        return Err(CliError::Undefined(
            "no pair of index columns has a defined correlation".into(),
        ));
    }
    Ok(())
}

struct TemporalRow {
    timestamp: String,
    real: Vec<Option<f64>>,
    summary: Vec<IndexSummary>,
}

fn timestamp_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let listing =
        fs::read_dir(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in listing {
        let entry = entry?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if entry.file_type()?.is_file() && !hidden {
            files.push(entry.path());
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

#[allow(clippy::too_many_arguments)]
pub fn temporal(
    dir: &Path,
    indices: &[String],
    parallelism: usize,
    keep_going: bool,
    load_args: &LoadArgs,
    out: Option<&Path>,
    s: &Settings,
) -> Result<()> {
    let indices: Vec<Index> = indices
        .iter()
        .map(|l| l.trim().parse::<Index>().map_err(CliError::Input))
        .collect::<Result<_>>()?;
    if indices.is_empty() {
        return Err(CliError::Input("no indices selected".into()));
    }
    if s.ensemble_count == 0 {
        return Err(CliError::Input("ensemble count must be at least 1".into()));
    }
    let files = timestamp_files(dir)?;
    if files.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: need at least 2 timestamp files, found {}",
            dir.display(),
            files.len()
        )));
    }
    let opts = load_args.options();
    let cfg = ReportConfig {
        classical: indices.iter().any(|i| i.is_classical()),
        ..s.report
    };
    let pool = thread_pool(parallelism)?;
    let results: Vec<Result<TemporalRow>> = pool.install(|| {
        files
            .par_iter()
            .enumerate()
            .map(|(t, path)| {
                let format = load_args
                    .format
                    .map(Into::into)
                    .unwrap_or(Format::from_path(path));
                let g = load(path, format, &opts)?;
                let report = IndexReport::compute(network_id(path), &g, &cfg);
                let rewire = s.rewire.with_seed(mix(s.rewire.seed, t as u64));
                let null = ensemble(&g, s.ensemble_count, &rewire, &cfg, &indices)?;
                Ok(TemporalRow {
                    timestamp: network_id(path),
                    real: indices.iter().map(|&i| report.value(i)).collect(),
                    summary: summarise(&null.reports, &indices),
                })
            })
            .collect()
    });

    let mut rows = Vec::new();
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) if keep_going => eprintln!("warning: skipping {}: {e}", path.display()),
            Err(e) => return Err(e),
        }
    }
    if rows.is_empty() {
        return Err(CliError::Input("no timestamp could be read".into()));
    }

    let mut header = vec!["timestamp".to_string()];
    for i in &indices {
        header.push(i.label().to_string());
        header.push(format!("{}_null_mean", i.label()));
        header.push(format!("{}_null_sd", i.label()));
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut fields = vec![row.timestamp.clone()];
            for (real, sum) in row.real.iter().zip(&row.summary) {
                fields.push(fmt_opt(*real));
                fields.push(fmt_opt(sum.mean));
                fields.push(fmt_opt(sum.sd));
            }
            fields
        })
        .collect();
    emit(out, &csv_bytes(&header, &table)?)?;
    if rows.iter().all(|r| r.real.iter().all(Option::is_none)) {
        return Err(CliError::Undefined(
            "selected indices are undefined at every timestamp".into(),
        ));
    }
    Ok(())
}

pub fn generate_graph(
    model: &ModelArgs,
    out: Option<&Path>,
    format: Format,
    s: &Settings,
) -> Result<()> {
    let model: Model = model.into();
    let g = generate(&model, s.report.seed)?;
    let mut bytes = Vec::new();
    match format {
        Format::EdgeList => {
            let isolated = (0..g.node_count()).filter(|&u| g.degree(u) == 0).count();
            if isolated > 0 {
                eprintln!(
                    "warning: {isolated} isolated nodes are not representable in an edge list"
                );
            }
            g.write_edge_list(&mut bytes)?
        }
        Format::MatrixMarket => g.write_matrix_market(&mut bytes)?,
    }
    emit(out, &bytes)
}
