//! Tables with a metadata header, written as CSV or JSON.

use serde_json::{json, Map, Value};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

/// 12 significant digits, scientific notation.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub config: Vec<(String, String)>,
    /// Derived quantities, in insertion order.
    pub results: Vec<(String, String)>,
    /// Column definitions and conventions.
    pub notes: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(config: &RunConfig, columns: Vec<&'static str>) -> Self {
        Self {
            command: config.command().name(),
            config: config.pairs().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            results: Vec::new(),
            notes: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn result(&mut self, key: &str, value: f64) {
        self.results.push((key.to_string(), sci(value)));
    }

    pub fn note(&mut self, key: &str, text: impl Into<String>) {
        self.notes.push((key.to_string(), text.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = format!("# zeno {}\n", self.command);
        for (k, v) in &self.config {
            out.push_str(&format!("# config {k} = {v}\n"));
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("# note {k}: {v}\n"));
        }
        for (k, v) in &self.results {
            out.push_str(&format!("# result {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => sci(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let pairs = |v: &[(String, String)]| -> Value {
            Value::Object(v.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<Map<_, _>>())
        };
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| match c {
                            // round-trip through the CSV text so both formats carry the same digits
                            Cell::Num(x) => sci(*x)
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or(Value::Null, Value::Number),
                            Cell::Int(i) => json!(i),
                            Cell::Empty => Value::Null,
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "config": pairs(&self.config),
            "notes": pairs(&self.notes),
            "results": pairs(&self.results),
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sci(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(sci(-1.5e-7), "-1.50000000000e-7");
        assert_eq!(sci(f64::NAN), "nan");
    }
}
