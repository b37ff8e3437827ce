//! Table and summary writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use monoscheme_core::ns3d::SnapshotRecord;
use serde::Serialize;

use crate::config::Format;
use crate::error::{CliError, CliResult};
use crate::summary::Summary;

/// A named table of numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        Self { name: name.to_owned(), columns: columns.iter().map(|c| c.to_string()).collect(), rows }
    }

    /// Build from equal-length columns.
    pub fn from_columns(name: &str, cols: Vec<(String, Vec<f64>)>) -> Self {
        let len = cols.first().map_or(0, |c| c.1.len());
        debug_assert!(cols.iter().all(|c| c.1.len() == len));
        let rows = (0..len).map(|r| cols.iter().map(|c| c.1[r]).collect()).collect();
        Self { name: name.to_owned(), columns: cols.into_iter().map(|c| c.0).collect(), rows }
    }

    pub fn snapshot(name: &str, records: &[SnapshotRecord]) -> Self {
        let rows = records
            .iter()
            .map(|r| vec![r.i as f64, r.j as f64, r.k as f64, r.vx, r.vy, r.vz, r.p])
            .collect();
        Self::new(name, &["i", "j", "k", "vx", "vy", "vz", "p"], rows)
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Shortest representation that parses back to the same value.
fn cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:?}")
    }
}

fn write_csv(path: &Path, t: &Table) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io(path, e))?;
    w.write_record(&t.columns).map_err(|e| io(path, e))?;
    for row in &t.rows {
        w.write_record(row.iter().map(|&v| cell(v))).map_err(|e| io(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))
}

fn write_jsonl(path: &Path, t: &Table) -> CliResult<()> {
    let mut out = Vec::new();
    for row in &t.rows {
        let obj: serde_json::Map<String, serde_json::Value> = t
            .columns
            .iter()
            .zip(row)
            .map(|(c, &v)| (c.clone(), serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, Into::into)))
            .collect();
        serde_json::to_writer(&mut out, &obj).map_err(|e| io(path, e))?;
        out.push(b'\n');
    }
    fs::write(path, out).map_err(|e| io(path, e))
}

pub fn write_json_pretty(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io(path, e))?;
    text.push('\n');
    let mut f = fs::File::create(path).map_err(|e| io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| io(path, e))
}

/// Write every table and `summary.json` into `dir`. Returns the summary path.
pub fn write_all(dir: &Path, format: Format, summary: &mut Summary, tables: &[Table]) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    summary.tables.clear();
    for t in tables {
        let file = format!("{}.{}", t.name, format.extension());
        let path = dir.join(&file);
        match format {
            Format::Csv => write_csv(&path, t)?,
            Format::Jsonl => write_jsonl(&path, t)?,
        }
        summary.tables.push(file);
    }
    let path = dir.join("summary.json");
    write_json_pretty(&path, summary)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_become_rows() {
        let t = Table::from_columns("t", vec![("a".into(), vec![1.0, 2.0]), ("b".into(), vec![3.0, 4.0])]);
        assert_eq!(t.rows, vec![vec![1.0, 3.0], vec![2.0, 4.0]]);
    }

    #[test]
    fn cells_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1e21] {
            assert_eq!(cell(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(cell(f64::NAN), "");
    }
}
