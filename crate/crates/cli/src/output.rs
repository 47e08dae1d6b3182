//! Tables rendered as CSV or JSON.

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Table {
    pub name: &'static str,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, headers: &[&str]) -> Self {
        Table {
            name,
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// CSV tables are separated by a blank line; JSON is one object keyed by
/// table name.
pub fn render(tables: &[Table], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            for (idx, table) in tables.iter().enumerate() {
                if idx > 0 {
                    out.push(b'\n');
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Output(e.to_string());
                w.write_record(&table.headers).map_err(io)?;
                for row in &table.rows {
                    w.write_record(row.iter().map(cell)).map_err(io)?;
                }
                out.extend(
                    w.into_inner()
                        .map_err(|e| CliError::Output(e.to_string()))?,
                );
            }
            String::from_utf8(out).map_err(|e| CliError::Output(e.to_string()))
        }
        Format::Json => {
            let mut root = Map::new();
            for table in tables {
                let rows = table
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            table
                                .headers
                                .iter()
                                .cloned()
                                .zip(row.iter().cloned())
                                .collect(),
                        )
                    })
                    .collect();
                root.insert(table.name.to_string(), Value::Array(rows));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(root))
                .map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}
