//! Ordered output records and their JSON/CSV rendering.

use std::io::Write;

use deformed_bec::Exponent;
use serde_json::{json, Map, Value as Json};

use crate::config::Resolved;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Count(u64),
    Text(String),
    Flag(bool),
    Missing,
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Real(v) if v.is_finite() => json!(v),
            Value::Real(v) => json!(v.to_string()),
            Value::Count(v) => json!(v),
            Value::Text(v) => json!(v),
            Value::Flag(v) => json!(v),
            Value::Missing => Json::Null,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Value::Real(v) => format!("{v:.11e}"),
            Value::Count(v) => v.to_string(),
            Value::Text(v) => v.clone(),
            Value::Flag(v) => v.to_string(),
            Value::Missing => String::new(),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Missing, Value::Real)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Flag(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

/// Column names carry their unit as a suffix (`_K`, `_J`, `_m`, ...).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Value)>);

impl Record {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.0.push((key.into(), value.into()));
    }

    pub fn extend(&mut self, other: Record) {
        self.0.extend(other.0);
    }

    fn to_json(&self) -> Json {
        let mut map = Map::new();
        for (k, v) in &self.0 {
            map.insert(k.clone(), v.to_json());
        }
        Json::Object(map)
    }

    fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }
}

fn exponent_value(e: Exponent<f64>) -> Value {
    match e {
        Exponent::Finite(s) => Value::Real(s),
        Exponent::Infinite => Value::Text("inf".into()),
    }
}

/// Resolved SI inputs echoed with every result.
pub fn inputs(r: &Resolved) -> Record {
    let mut rec = Record::default();
    rec.push("mass_kg", r.gas.mass());
    rec.push("xi1", r.gas.species.xi1());
    rec.push("alpha_m_s", r.gas.alpha());
    rec.push("n_total", r.n_total);
    rec.push("gamma", r.gas.gamma());
    for (i, s) in r.subspaces.iter().enumerate() {
        let p = format!("sub{}", i + 1);
        rec.push(format!("{p}_n"), Value::Count(u64::from(s.n)));
        rec.push(format!("{p}_s"), exponent_value(s.exponent));
        rec.push(format!("{p}_A_J"), s.energy_j);
        rec.push(format!("{p}_a_m"), s.length_m);
        rec.push(format!("{p}_omega_rad_s"), s.omega_rad_s);
    }
    rec
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// A command result: a single record, or a table of rows sharing the
/// echoed inputs.
pub enum Output {
    Single {
        command: &'static str,
        inputs: Record,
        result: Record,
    },
    Table {
        command: &'static str,
        inputs: Record,
        rows: Vec<Record>,
    },
}

impl Output {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let doc = match self {
                    Output::Single {
                        command,
                        inputs,
                        result,
                    } => json!({
                        "command": command,
                        "inputs": inputs.to_json(),
                        "result": result.to_json(),
                    }),
                    Output::Table { command, inputs, rows } => json!({
                        "command": command,
                        "inputs": inputs.to_json(),
                        "rows": rows.iter().map(Record::to_json).collect::<Vec<_>>(),
                    }),
                };
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                let rows: Vec<Record> = match self {
                    Output::Single { inputs, result, .. } => {
                        let mut row = inputs.clone();
                        row.extend(result.clone());
                        vec![row]
                    }
                    Output::Table { inputs, rows, .. } => rows
                        .iter()
                        .map(|r| {
                            let mut row = inputs.clone();
                            row.extend(r.clone());
                            row
                        })
                        .collect(),
                };
                if let Some(first) = rows.first() {
                    w.write_record(first.keys())?;
                }
                for row in &rows {
                    w.write_record(row.0.iter().map(|(_, v)| v.to_csv()))?;
                }
                w.flush()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_twelve_significant_digits() {
        assert_eq!(Value::Real(1.0 / 3.0).to_csv(), "3.33333333333e-1");
        assert_eq!(Value::Missing.to_csv(), "");
    }

    #[test]
    fn json_keeps_field_order() {
        let mut r = Record::default();
        r.push("z", 1.0);
        r.push("a", 2.0);
        let text = r.to_json().to_string();
        assert!(text.find("\"z\"").unwrap() < text.find("\"a\"").unwrap());
    }
}
