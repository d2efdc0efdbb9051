//! CSV tables with a `#`-prefixed metadata block.
//!
//! ```text
//! # kind: timeseries
//! # preset: figure1
//! t,expected_payoff
//! 0,0
//! 1,-0.01
//! ```
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! parsing a written table gives back exactly the same values.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Timeseries,
    Distribution,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Timeseries => "timeseries",
            TableKind::Distribution => "distribution",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "timeseries" => Ok(TableKind::Timeseries),
            "distribution" => Ok(TableKind::Distribution),
            other => Err(format!("unknown table kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub kind: TableKind,
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl OutputTable {
    pub fn timeseries(series: &[(u64, f64)]) -> Self {
        Self {
            kind: TableKind::Timeseries,
            metadata: Vec::new(),
            header: vec!["t".into(), "expected_payoff".into()],
            rows: series.iter().map(|&(t, m)| vec![t as f64, m]).collect(),
        }
    }

    /// `columns` are named after `x`; each row is `x` followed by one value per column.
    pub fn distribution(columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        let mut header = vec!["x".to_string()];
        header.extend(columns.iter().map(|c| c.to_string()));
        Self {
            kind: TableKind::Distribution,
            metadata: Vec::new(),
            header,
            rows,
        }
    }

    pub fn meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# kind: {}", self.kind)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("table output is UTF-8")
    }

    pub fn write_file(&self, path: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        self.write(std::io::BufWriter::new(file))
            .map_err(|e| CliError::io(path, e))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut kind = None;
        let mut metadata = Vec::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim_start();
            let (k, v) = body
                .split_once(": ")
                .or_else(|| body.strip_suffix(':').map(|k| (k, "")))
                .ok_or_else(|| format!("malformed metadata line {line:?}"))?;
            if k == "kind" {
                kind = Some(v.parse()?);
            } else {
                metadata.push((k.to_string(), v.to_string()));
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| e.to_string())?;
            let row = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| format!("{f:?}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self {
            kind: kind.ok_or("missing kind")?,
            metadata,
            header,
            rows,
        })
    }

    /// Everything after the metadata block.
    pub fn data_section(text: &str) -> &str {
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            if !line.starts_with('#') {
                break;
            }
            offset += line.len();
        }
        &text[offset..]
    }
}
