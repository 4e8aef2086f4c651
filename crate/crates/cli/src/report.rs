//! Report assembly and serialization. Numbers are written as decimal strings
//! with enough digits to round-trip the working precision; complex numbers
//! become `{"re": .., "im": ..}`.

use std::io::Write;

use fig8_core::precision::{decimal_digits, format_float};
use rug::{Complex, Float};
use serde_json::{json, Map, Value};

/// Formats multiprecision values at a fixed number of digits.
#[derive(Debug, Clone, Copy)]
pub struct Fmt {
    digits: usize,
}

impl Fmt {
    pub fn new(bits: u32) -> Self {
        Fmt {
            digits: decimal_digits(bits),
        }
    }

    pub fn real(&self, x: &Float) -> Value {
        Value::String(format_float(x, self.digits))
    }

    pub fn complex(&self, z: &Complex) -> Value {
        json!({ "re": self.real(z.real()), "im": self.real(z.imag()) })
    }

    pub fn opt_complex(&self, z: Option<&Complex>) -> Value {
        z.map_or(Value::Null, |z| self.complex(z))
    }
}

/// `f64` diagnostics (residuals, spreads) in shortest round-trip form.
pub fn diag(x: f64) -> Value {
    Value::String(format!("{x:e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Meta {
    pub bits: u32,
    pub tol: f64,
    pub theta: Option<f64>,
    /// `None` when timing is disabled.
    pub wall_ms: Option<f64>,
    /// Per-item timings kept out of the data section.
    pub timings: Option<Value>,
}

impl Meta {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("bits".into(), json!(self.bits));
        m.insert("tol".into(), diag(self.tol));
        m.insert("theta".into(), self.theta.map_or(Value::Null, |t| json!(t)));
        m.insert("wall_ms".into(), self.wall_ms.map_or(Value::Null, |t| json!(t)));
        if let Some(t) = &self.timings {
            m.insert("timings_ms".into(), t.clone());
        }
        Value::Object(m)
    }
}

/// Command output before serialization. `table` is an optional tabular view
/// used by the CSV writer in place of the flattened data.
pub struct Report {
    pub data: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Two-column rows appended after the records.
    pub trailer: Vec<(String, String)>,
}

pub fn write_report(out: &mut dyn Write, fmt: Format, meta: &Meta, report: &Report) -> std::io::Result<()> {
    match fmt {
        Format::Json => {
            let doc = json!({ "meta": meta.to_json(), "data": report.data });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
            match &report.table {
                Some(t) => {
                    w.write_record(&t.header)?;
                    for r in &t.rows {
                        w.write_record(r)?;
                    }
                    for (k, v) in &t.trailer {
                        w.write_record([k, v])?;
                    }
                }
                None => {
                    w.write_record(["key", "value"])?;
                    for (k, v) in flatten(&report.data) {
                        w.write_record([k, v])?;
                    }
                }
            }
            w.flush()
        }
        Format::Text => {
            for (k, v) in flatten(&meta.to_json()) {
                writeln!(out, "meta.{k} = {v}")?;
            }
            for (k, v) in flatten(&report.data) {
                writeln!(out, "{k} = {v}")?;
            }
            Ok(())
        }
    }
}

/// Dotted-path leaves of a JSON value, arrays indexed by position.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, v)| walk(&join(k), v, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| walk(&join(&i.to_string()), v, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}
