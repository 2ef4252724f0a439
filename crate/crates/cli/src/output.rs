//! Tables and files written by the commands.
//!
//! CSV files open with a `#` comment block (tool version, command, config
//! hash) followed by a header row. Floats use the shortest representation
//! that round-trips, so identical inputs give identical bytes.

use crate::{CliError, CliResult, TOOL_VERSION};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

/// Hex SHA-256 of the canonical TOML rendering of a config.
pub fn config_hash<T: Serialize>(cfg: &T) -> CliResult<String> {
    let canon = toml::to_string(cfg).map_err(|e| CliError::Numerical(format!("cannot serialize config: {e}")))?;
    Ok(hex(&Sha256::digest(canon.as_bytes())))
}

pub fn text_hash(s: &str) -> String {
    hex(&Sha256::digest(s.as_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self, meta: &Meta) -> CliResult<Vec<u8>> {
        let mut buf = Vec::new();
        buf.extend_from_slice(format!("# tool: hyperloc {TOOL_VERSION}\n").as_bytes());
        buf.extend_from_slice(format!("# command: {}\n", meta.command).as_bytes());
        buf.extend_from_slice(format!("# config_sha256: {}\n", meta.config_hash).as_bytes());
        let mut w = csv::Writer::from_writer(buf);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    /// Read a table written by [`Table::to_csv`]; comment lines are skipped.
    pub fn read_csv(path: &Path) -> CliResult<Table> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let header = r
            .headers()
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
            .iter()
            .map(String::from)
            .collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(Table { header, rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub command: String,
    pub config_hash: String,
}

/// A file produced by a command, not yet written.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Csv { name: String, table: Table },
    Json { name: String, text: String },
}

impl Artifact {
    pub fn name(&self) -> &str {
        match self {
            Artifact::Csv { name, .. } | Artifact::Json { name, .. } => name,
        }
    }
}

/// Everything a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub meta: Meta,
    pub artifacts: Vec<Artifact>,
    /// human-readable lines for stdout
    pub summary: Vec<String>,
}

impl RunOutput {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.artifacts.iter().find_map(|a| match a {
            Artifact::Csv { name: n, table } if n == name => Some(table),
            _ => None,
        })
    }

    /// The first CSV artifact.
    pub fn main_table(&self) -> Option<(&str, &Table)> {
        self.artifacts.iter().find_map(|a| match a {
            Artifact::Csv { name, table } => Some((name.as_str(), table)),
            _ => None,
        })
    }

    pub fn write(&self, dir: &Path) -> CliResult<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for a in &self.artifacts {
            let path = dir.join(a.name());
            match a {
                Artifact::Csv { table, .. } => std::fs::write(&path, table.to_csv(&self.meta)?)?,
                Artifact::Json { text, .. } => std::fs::write(&path, format!("{text}\n"))?,
            }
            written.push(path);
        }
        Ok(written)
    }
}

pub fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Numerical(format!("cannot serialize output: {e}")))
}
