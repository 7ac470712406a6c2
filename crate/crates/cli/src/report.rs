use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// A subcommand result: a fixed-column table plus summary fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub d: i64,
    pub seed: u64,
    pub params: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    #[serde(flatten)]
    pub summary: Map<String, Value>,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() && x != 0.0 {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or_else(|| Value::String(x.to_string()), Value::Number)
}

pub fn int(x: impl Into<i128>) -> Value {
    let x = x.into();
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

pub fn text(s: impl ToString) -> Value {
    Value::String(s.to_string())
}

pub fn complex(z: Complex64) -> [Value; 3] {
    [float(z.re), float(z.im), float(z.norm())]
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => {
                let a = x.abs();
                if a == 0.0 || (1e-5..1e15).contains(&a) {
                    x.to_string()
                } else {
                    format!("{x:e}")
                }
            }
            _ => n.to_string(),
        },
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new(command: &str, d: i64, seed: u64, params: Value, columns: &[&str]) -> Report {
        Report {
            command: command.into(),
            d,
            seed,
            params,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = Value>) {
        let row: Vec<Value> = cells.into_iter().collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(csv_cell))?;
        }
        w.flush()
    }
}
