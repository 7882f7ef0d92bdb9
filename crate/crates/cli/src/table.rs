//! Column-oriented numeric tables with a metadata block.
//!
//! CSV tables carry their metadata in a `<stem>.meta.json` sidecar; JSON
//! tables embed it. Numbers are written in shortest round-trip form, so equal
//! inputs give byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::ChartKind;
use crate::error::{CliError, Result};

pub const ARTIFACT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub artifact: String,
    pub version: String,
    /// Subcommand that produced the table.
    pub command: String,
    /// What the table holds, e.g. `probabilities`.
    pub table: String,
    /// Legend text for this table's series.
    pub label: String,
    /// Preferred rendering.
    pub chart: ChartKind,
    pub x_label: String,
    pub y_label: String,
    /// The validated input, sufficient to regenerate the table.
    pub config: serde_json::Value,
    /// Extra derived facts, e.g. monotonicity flags.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub notes: serde_json::Map<String, serde_json::Value>,
}

impl Metadata {
    pub fn new(command: &str, table: &str, config: serde_json::Value) -> Self {
        Metadata {
            artifact: ARTIFACT.into(),
            version: VERSION.into(),
            command: command.into(),
            table: table.into(),
            label: table.into(),
            chart: ChartKind::Line,
            x_label: String::new(),
            y_label: String::new(),
            config,
            notes: serde_json::Map::new(),
        }
    }

    pub fn chart(mut self, kind: ChartKind, x_label: &str, y_label: &str) -> Self {
        self.chart = kind;
        self.x_label = x_label.into();
        self.y_label = y_label.into();
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(metadata: Metadata, columns: &[&str]) -> Self {
        ResultTable {
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns.iter().position(|c| c == name).ok_or_else(|| {
            CliError::Table(format!(
                "table `{}` has no column `{name}` (columns: {})",
                self.metadata.table,
                self.columns.join(", ")
            ))
        })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Column count is consistent and every value is finite.
    pub fn check(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CliError::Table(format!(
                    "row {i} has {} values for {} columns",
                    row.len(),
                    self.columns.len()
                )));
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(CliError::Table(format!(
                    "row {i}, column `{}`: non-finite value {v}",
                    self.columns[j]
                )));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Table(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_number(*v)))
                .map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Table(e.to_string()))
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("tables serialize");
        out.push(b'\n');
        out
    }

    fn metadata_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(&self.metadata).expect("metadata serializes");
        out.push(b'\n');
        out
    }

    /// Writes `<dir>/<stem>.<ext>` (plus the CSV sidecar) and returns the
    /// table path.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf> {
        self.check()?;
        let path = dir.join(format!("{stem}.{}", format.extension()));
        match format {
            Format::Csv => {
                write_atomic(&path, &self.to_csv()?)?;
                write_atomic(&sidecar(&path), &self.metadata_json())?;
            }
            Format::Json => write_atomic(&path, &self.to_json())?,
        }
        Ok(path)
    }

    /// Reads a table written by [`ResultTable::write`]. A CSV without a
    /// sidecar gets placeholder metadata.
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let table = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_slice(&bytes)
                .map_err(|e| CliError::Table(format!("{}: {e}", path.display())))?
        } else {
            let mut table = parse_csv(&bytes)
                .map_err(|e| CliError::Table(format!("{}: {e}", path.display())))?;
            let meta = sidecar(path);
            if meta.exists() {
                let text = std::fs::read(&meta).map_err(|e| CliError::io(&meta, e))?;
                table.metadata = serde_json::from_slice(&text)
                    .map_err(|e| CliError::Table(format!("{}: {e}", meta.display())))?;
            } else {
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
                table.metadata = Metadata::new("unknown", stem, serde_json::Value::Null);
            }
            table
        };
        table.check()?;
        Ok(table)
    }
}

fn parse_csv(bytes: &[u8]) -> std::result::Result<ResultTable, String> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let columns: Vec<String> = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = rec
            .iter()
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("row {i}: `{v}` is not a number"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(ResultTable {
        metadata: Metadata::new("unknown", "", serde_json::Value::Null),
        columns,
        rows,
    })
}

/// `<stem>.meta.json` beside `path`.
pub fn sidecar(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    path.with_file_name(format!("{stem}.meta.json"))
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v}")
    } else {
        // Debug switches to exponent notation far from unity
        format!("{v:?}")
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
