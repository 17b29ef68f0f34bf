//! Rendering of result blocks as CSV or JSON.
//!
//! CSV blocks carry a mandatory header row and are separated by one blank
//! line. JSON output is a single object for one block and an array otherwise.

use fermigas::UniversalCurve;
use serde_json::{json, Map, Number, Value as Json};

use crate::params::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(v) => format_float(*v),
            Value::Int(v) => v.to_string(),
            Value::Text(s) => quote(s),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Num(v) => float_json(*v),
            Value::Int(v) => json!(v),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Block {
    /// A curve; `meta` entries appear only in JSON.
    Curve {
        curve: UniversalCurve,
        meta: Vec<(&'static str, Value)>,
    },
    Report(Vec<(&'static str, Value)>),
    Table {
        columns: Vec<&'static str>,
        rows: Vec<Vec<Value>>,
    },
}

impl Block {
    pub fn curve(curve: UniversalCurve) -> Self {
        Block::Curve { curve, meta: Vec::new() }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn float_json(v: f64) -> Json {
    Number::from_f64(v).map(Json::Number).unwrap_or(Json::Null)
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(blocks: &[Block], format: Format) -> Result<String, CliError> {
    if blocks.is_empty() {
        return Err(CliError::Usage("nothing to write".into()));
    }
    for b in blocks {
        if let Block::Curve { curve, .. } = b {
            if curve.is_empty() {
                return Err(CliError::Usage("curve has no samples; nothing written".into()));
            }
        }
    }
    Ok(match format {
        Format::Csv => blocks.iter().map(csv_block).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let mut values: Vec<Json> = blocks.iter().map(json_block).collect();
            let doc = if values.len() == 1 { values.remove(0) } else { Json::Array(values) };
            let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failure(e.to_string()))?;
            text.push('\n');
            text
        }
    })
}

fn csv_block(block: &Block) -> String {
    let mut out = String::new();
    match block {
        Block::Curve { curve, .. } => {
            out.push_str(&format!("{},{}\n", curve.x_label().as_str(), curve.y_label().as_str()));
            for (x, y) in curve.samples() {
                out.push_str(&format!("{},{}\n", format_float(*x), format_float(*y)));
            }
        }
        Block::Report(rows) => {
            out.push_str("key,value\n");
            for (k, v) in rows {
                out.push_str(&format!("{k},{}\n", v.csv()));
            }
        }
        Block::Table { columns, rows } => {
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.iter().map(Value::csv).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
        }
    }
    out
}

fn json_block(block: &Block) -> Json {
    match block {
        Block::Curve { curve, meta } => {
            let mut map = Map::new();
            map.insert("x_label".into(), json!(curve.x_label().as_str()));
            map.insert("y_label".into(), json!(curve.y_label().as_str()));
            let samples = curve.samples().iter().map(|(x, y)| json!([float_json(*x), float_json(*y)])).collect();
            map.insert("samples".into(), Json::Array(samples));
            for (k, v) in meta {
                map.insert((*k).into(), v.json());
            }
            Json::Object(map)
        }
        Block::Report(rows) => Json::Object(rows.iter().map(|(k, v)| ((*k).to_string(), v.json())).collect()),
        Block::Table { columns, rows } => {
            let rows: Vec<Json> = rows
                .iter()
                .map(|row| Json::Object(columns.iter().zip(row).map(|(c, v)| ((*c).to_string(), v.json())).collect()))
                .collect();
            json!({ "rows": rows })
        }
    }
}
