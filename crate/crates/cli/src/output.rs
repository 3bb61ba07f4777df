use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

/// Flattens one level of nested objects into `outer.inner` columns.
fn flatten(obj: &Map<String, Value>) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, v) in obj {
        match v {
            Value::Object(inner) => {
                for (ik, iv) in inner {
                    out.push((format!("{k}.{ik}"), cell(iv)));
                }
            }
            _ => out.push((k.clone(), cell(v))),
        }
    }
    out
}

/// Rows come from the `rows` array when present, else the object itself.
pub fn to_csv(value: &Value) -> Result<String> {
    let rows: Vec<Vec<(String, String)>> = match value {
        Value::Object(o) => match o.get("rows") {
            Some(Value::Array(items)) => items
                .iter()
                .map(|r| r.as_object().map(flatten).unwrap_or_else(|| vec![("value".into(), cell(r))]))
                .collect(),
            _ => vec![flatten(o)],
        },
        Value::Array(items) => items.iter().filter_map(|r| r.as_object().map(flatten)).collect(),
        other => vec![vec![("value".into(), cell(other))]],
    };
    // header keeps first-seen column order across rows
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in &rows {
        let rec: Vec<&str> = header
            .iter()
            .map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str()))
            .collect();
        w.write_record(rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn emit(value: &Value, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Csv => to_csv(value)?,
    };
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
