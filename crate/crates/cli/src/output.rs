//! Formatting of results: 12 significant digits everywhere, CSV with a header
//! row, JSON as `{config, result}` and a plain matrix block for contours.

use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};

/// Round to 12 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Text form of a rounded number: plain decimals for moderate magnitudes,
/// exponent form otherwise. Failed points print as `nan`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let r = round_sig(x);
    if r == 0.0 || (1e-4..1e15).contains(&r.abs()) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

/// Round every float in a JSON tree.
fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Tabular result with a fixed header.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Everything a command produces, in each supported shape.
pub struct Report {
    pub json: Value,
    pub table: Table,
    pub matrix: Option<String>,
    /// Points that failed numerically, identified by their coordinates.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new<T: Serialize>(result: &T, table: Table) -> Result<Self> {
        Ok(Self {
            json: serde_json::to_value(result).context("serializing result")?,
            table,
            matrix: None,
            failures: Vec::new(),
        })
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    config: &'a RunConfig,
    result: &'a Value,
}

pub fn render(config: &RunConfig, report: &Report) -> Result<Vec<u8>> {
    match config.format {
        Format::Json => {
            let mut result = report.json.clone();
            round_value(&mut result);
            let mut text = serde_json::to_vec_pretty(&Envelope {
                config,
                result: &result,
            })?;
            text.push(b'\n');
            Ok(text)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.table.header)?;
            for row in &report.table.rows {
                w.write_record(row)?;
            }
            Ok(w.into_inner().context("flushing csv")?)
        }
        Format::Matrix => Ok(report.matrix.clone().unwrap_or_default().into_bytes()),
    }
}

pub fn emit(config: &RunConfig, report: &Report) -> Result<()> {
    let bytes = render(config, report)?;
    match &config.output {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {path}")),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            Ok(out.flush()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666667);
        assert_eq!(round_sig(1.999_999_999_999_9), 2.0);
        assert_eq!(round_sig(-1_234.567_890_123_456), -1_234.567_890_12);
        assert_eq!(round_sig(0.0), 0.0);
        assert!(round_sig(f64::NAN).is_nan());
        assert_eq!(num(f64::NAN), "nan");
        assert_eq!(num(1e-20 / 3.0), "3.33333333333e-21");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(-2.0), "-2");
    }

    #[test]
    fn json_tree_is_rounded() {
        let mut v = serde_json::json!({"a": 1.0 / 3.0, "b": [2.0 / 3.0, 5], "c": {"d": 0.1 + 0.2}});
        round_value(&mut v);
        assert_eq!(v["a"], serde_json::json!(0.333333333333));
        assert_eq!(v["b"][1], serde_json::json!(5));
        assert_eq!(v["c"]["d"], serde_json::json!(0.3));
    }
}
