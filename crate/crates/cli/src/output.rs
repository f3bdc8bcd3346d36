//! Rendering of command results as JSON or CSV.

use serde_json::{Map, Value};
use thauma_core::io::{fmt_sig, json_number, round_sig};
use thauma_core::HermitianOperator;

use crate::cli::Format;

/// A command result: either a flat record, a table, or preformatted text.
pub enum Report {
    Record(Vec<(String, Field)>),
    Table { header: Vec<String>, rows: Vec<Vec<Field>> },
    /// Already-rendered JSON and CSV forms.
    Raw { json: Value, csv: Option<String> },
}

pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// Only shown in JSON.
    Json(Value),
}

impl Field {
    fn to_json(&self) -> Value {
        match self {
            Field::Num(x) => json_number(*x),
            Field::Int(n) => Value::from(*n),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Json(v) => v.clone(),
        }
    }

    fn to_csv(&self) -> Option<String> {
        match self {
            Field::Num(x) => Some(fmt_sig(*x)),
            Field::Int(n) => Some(n.to_string()),
            Field::Text(s) => Some(s.clone()),
            Field::Bool(b) => Some(b.to_string()),
            Field::Json(_) => None,
        }
    }
}

pub fn operator_json(op: &HermitianOperator) -> Value {
    round_numbers(serde_json::to_value(op.to_json()).expect("finite operator"))
}

/// Applies the 9-significant-digit rule to every number in a JSON tree.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => json_number(round_sig(x)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, round_numbers(x))).collect()),
        other => other,
    }
}

fn record_json(fields: &[(String, Field)]) -> Value {
    let mut map = Map::new();
    for (k, f) in fields {
        map.insert(k.clone(), f.to_json());
    }
    Value::Object(map)
}

pub fn render(report: &Report, format: Format) -> String {
    match (report, format) {
        (Report::Record(fields), Format::Json) => pretty(&record_json(fields)),
        (Report::Record(fields), Format::Csv) => {
            let kept: Vec<_> = fields.iter().filter_map(|(k, f)| f.to_csv().map(|v| (k, v))).collect();
            let header = kept.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",");
            let row = kept.iter().map(|(_, v)| v.as_str()).collect::<Vec<_>>().join(",");
            format!("{header}\n{row}\n")
        }
        (Report::Table { header, rows }, Format::Json) => {
            let items = rows
                .iter()
                .map(|r| record_json(&header.iter().cloned().zip(r.iter().map(clone_field)).collect::<Vec<_>>()))
                .collect();
            pretty(&Value::Array(items))
        }
        (Report::Table { header, rows }, Format::Csv) => {
            let mut out = header.join(",");
            out.push('\n');
            for r in rows {
                let cells: Vec<String> = r.iter().map(|f| f.to_csv().unwrap_or_default()).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        (Report::Raw { json, .. }, Format::Json) => pretty(json),
        (Report::Raw { csv: Some(csv), .. }, Format::Csv) => csv.clone(),
        (Report::Raw { json, csv: None }, Format::Csv) => pretty(json),
    }
}

fn clone_field(f: &Field) -> Field {
    match f {
        Field::Num(x) => Field::Num(*x),
        Field::Int(n) => Field::Int(*n),
        Field::Text(s) => Field::Text(s.clone()),
        Field::Bool(b) => Field::Bool(*b),
        Field::Json(v) => Field::Json(v.clone()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
