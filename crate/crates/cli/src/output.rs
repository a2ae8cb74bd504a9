use std::io::Write;
use std::path::Path;

use nds_core::{Index, IndexReport};
use tempfile::NamedTempFile;

use crate::error::Result;

/// `x` with six significant digits, in scientific notation outside
/// `[1e-4, 1e15)`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..15).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding can carry into a new leading digit, e.g. 9.999996 -> 10.00000
        let digits = s
            .chars()
            .filter(char::is_ascii_digit)
            .skip_while(|&c| c == '0')
            .count();
        if digits > 6 && decimals > 0 {
            return format!("{x:.prec$}", prec = decimals - 1);
        }
        s
    } else {
        format!("{x:.5e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

/// Writes `bytes` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub const REPORT_PREFIX: [&str; 6] = ["network_id", "source", "n", "m", "density", "components"];
pub const REPORT_SUFFIX: [&str; 5] = [
    "v",
    "unreachable_pairs",
    "multi_ordered_degrees",
    "warnings",
    "error",
];

pub fn report_header() -> Vec<String> {
    REPORT_PREFIX
        .iter()
        .map(|s| s.to_string())
        .chain(Index::ALL.iter().map(|i| i.label().to_string()))
        .chain(REPORT_SUFFIX.iter().map(|s| s.to_string()))
        .collect()
}

pub fn report_row(report: &IndexReport) -> Vec<String> {
    let mut row = vec![
        report.network_id.clone(),
        report.provenance.source.clone().unwrap_or_default(),
        report.n.to_string(),
        report.m.to_string(),
        fmt_opt(report.density),
        report.components.to_string(),
    ];
    row.extend(Index::ALL.iter().map(|&i| fmt_opt(report.value(i))));
    row.push(fmt_opt(report.classical.degree_variance));
    row.push(
        report
            .classical
            .unreachable_pairs
            .map(|u| u.to_string())
            .unwrap_or_default(),
    );
    row.push(
        report
            .nds
            .multi_ordered_degrees
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    row.push(report.warnings.join("; "));
    row.push(String::new());
    row
}

pub fn error_row(network_id: &str, source: &str, error: &str) -> Vec<String> {
    let width = report_header().len();
    let mut row = vec![String::new(); width];
    row[0] = network_id.to_string();
    row[1] = source.to_string();
    row[width - 1] = error.to_string();
    row
}

pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner()
        .map_err(|e| crate::error::CliError::Input(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig(0.323529411764), "0.323529");
        assert_eq!(fmt_sig(1.7136), "1.71360");
        assert_eq!(fmt_sig(123456.78), "123457");
        assert_eq!(fmt_sig(-0.000123456789), "-0.000123457");
        assert_eq!(fmt_sig(9.9999996), "10.0000");
        assert_eq!(fmt_sig(1.0), "1.00000");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.5e-7), "1.50000e-7");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
