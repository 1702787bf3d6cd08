use std::fmt::Write as _;
use std::time::Duration;

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A CSV view of a payload.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct Output {
    pub payload: Value,
    pub table: Option<Table>,
}

pub struct Envelope<'a> {
    pub subcommand: &'a str,
    pub input: &'a str,
    pub config: Value,
    pub output: Output,
    pub elapsed: Option<Duration>,
}

impl Envelope<'_> {
    fn digest(&self) -> String {
        format!("sha256:{}", hex::encode(Sha256::digest(self.input.as_bytes())))
    }

    fn json(&self) -> Value {
        let mut root = Map::new();
        root.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        root.insert("input_digest".into(), json!(self.digest()));
        root.insert("subcommand".into(), json!(self.subcommand));
        root.insert("config".into(), self.config.clone());
        root.insert("payload".into(), self.output.payload.clone());
        if let Some(t) = self.elapsed {
            root.insert("timing".into(), json!({ "elapsed_ms": t.as_millis() as u64 }));
        }
        Value::Object(root)
    }

    pub fn emit(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).map_err(|e| e.to_string())?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let table = self
                    .output
                    .table
                    .as_ref()
                    .ok_or_else(|| format!("no CSV schema for `{}`; use json or text", self.subcommand))?;
                let mut s = table.header.join(",");
                s.push('\n');
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                Ok(s)
            }
            Format::Text => {
                let mut s = String::new();
                render_text(&mut s, &self.json(), 0);
                Ok(s)
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(t) => {
                        let _ = writeln!(out, "{pad}{k}: {t}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar_text(x) {
                    Some(t) => {
                        let _ = writeln!(out, "{pad}- {t}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_text(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}
