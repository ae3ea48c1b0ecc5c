//! Plot-ready tables and their CSV/JSON encodings.
//!
//! CSV layout: a `# key=value ...` metadata line, an optional
//! `# summary {json}` line, a header row, then data rows. Floats are written
//! with 17 significant digits so every `f64` survives a round trip.

use std::fmt::Write as _;
use std::io::Write;

use serde_json::{json, Map};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            Value::Text(_) => None,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(i) => json!(i),
            Value::Float(x) => json!(x),
            Value::Text(s) => json!(s),
        }
    }

    fn parse(field: &str) -> Self {
        if let Ok(i) = field.parse::<i64>() {
            Value::Int(i)
        } else if let Ok(x) = field.parse::<f64>() {
            Value::Float(x)
        } else {
            Value::Text(field.to_string())
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    /// Ordered `key=value` pairs echoed on the first line.
    pub metadata: Vec<(String, String)>,
    pub summary: Option<serde_json::Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Value>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx].clone()).collect())
    }

    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?.iter().map(Value::as_f64).collect()
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("#");
        for (k, v) in &self.metadata {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        if let Some(summary) = &self.summary {
            let _ = writeln!(out, "# summary {summary}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Int(i) => i.to_string(),
                    Value::Float(x) => format!("{x:.16e}"),
                    Value::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().peekable();
        let meta_line = lines
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .ok_or_else(|| Error::InvalidArgument("missing metadata line".into()))?;
        let metadata = meta_line
            .split_whitespace()
            .filter_map(|tok| tok.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();

        let mut summary = None;
        if let Some(rest) = lines.peek().and_then(|l| l.strip_prefix("# summary ")) {
            summary = Some(
                serde_json::from_str(rest)
                    .map_err(|e| Error::InvalidArgument(format!("bad summary line: {e}")))?,
            );
            lines.next();
        }
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("missing header row".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<Value> = line.split(',').map(Value::parse).collect();
            if row.len() != columns.len() {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} fields, header has {}",
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self {
            metadata,
            summary,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let parameters: Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Value::to_json).collect())
            .collect();
        json!({
            "version": FORMAT_VERSION,
            "command": self.metadata_value("command"),
            "generator": self.metadata_value("generator"),
            "parameters": parameters,
            "summary": self.summary,
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    /// Writes to `path`, or to stdout when `path` is `-`.
    pub fn write_to(&self, path: &str, format: Format) -> Result<()> {
        let text = self.render(format);
        let io_err = |source| Error::Io {
            path: path.into(),
            source,
        };
        if path == "-" {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).map_err(io_err)?;
            lock.flush().map_err(io_err)
        } else {
            std::fs::write(path, text).map_err(io_err)
        }
    }
}
