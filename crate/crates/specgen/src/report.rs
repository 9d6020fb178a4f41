//! Deterministic report rendering: JSON with a fixed key order, the flat
//! CSV spectrum table, and a human-readable text table.
//!
//! Reports are golden-tested byte for byte, so the writer is hand rolled:
//! object keys keep insertion order, and floats use one formatting policy
//! everywhere so the CSV and JSON encodings of a value always agree.

use std::fmt::Write as _;

use crate::repfinder::{DiscrepancyRecord, SpectrumRow, SpectrumTable};

pub const SCHEMA: &str = "specgen/1";

/// Shortest round-trip float formatting; values below 1e-4 in magnitude
/// switch to scientific notation and negative zero collapses to zero.
pub fn fmt_f64(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    let v = if v == 0.0 { 0.0 } else { v };
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Minimal JSON document tree; objects preserve insertion order.
#[derive(Debug, Clone)]
pub enum Json {
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn obj(fields: Vec<(&str, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Num(v) => out.push_str(&fmt_f64(*v)),
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        '\r' => out.push_str("\\r"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Json::Str(k.clone()).write(out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

pub fn discrepancy_json(rec: &DiscrepancyRecord) -> Json {
    Json::obj(vec![
        ("source", Json::str(&rec.source)),
        ("printed", Json::Num(rec.printed)),
        ("derived", Json::Num(rec.derived)),
        ("relative_deviation", Json::Num(rec.relative_deviation)),
        ("note", Json::str(&rec.note)),
    ])
}

pub fn row_json(row: &SpectrumRow) -> Json {
    Json::obj(vec![
        ("p", Json::Int(row.p as i64)),
        ("E", Json::Num(row.e)),
        ("u", Json::Num(row.u)),
        ("positivity_ok", Json::Bool(row.positivity_ok)),
        ("continuum_positive", Json::Bool(row.continuum_positive)),
        (
            "pairing",
            Json::Arr(vec![
                Json::Int(row.pairing.0 as i64),
                Json::Int(row.pairing.1 as i64),
            ]),
        ),
        (
            "discrepancies",
            Json::Arr(row.discrepancies.iter().map(discrepancy_json).collect()),
        ),
    ])
}

/// Flat CSV encoding of a spectrum table. Columns are fixed; numeric cells
/// use the same formatting as the JSON encoding.
pub fn spectrum_csv(table: &SpectrumTable) -> String {
    let mut out = String::from("p,E,u,positivity_ok,pairing_i,pairing_j,n_discrepancies\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.p,
            fmt_f64(row.e),
            fmt_f64(row.u),
            row.positivity_ok,
            row.pairing.0,
            row.pairing.1,
            row.discrepancies.len()
        );
    }
    out
}

/// Aligned text table for terminal use; not part of the golden outputs.
pub fn spectrum_text(table: &SpectrumTable) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>3}  {:>22}  {:>22}  {:>8}  {:>7}  {:>5}",
        "p", "E", "u", "positive", "pairing", "disc"
    );
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{:>3}  {:>22}  {:>22}  {:>8}  {:>3}/{:<3}  {:>5}",
            row.p,
            fmt_f64(row.e),
            fmt_f64(row.u),
            row.positivity_ok,
            row.pairing.0,
            row.pairing.1,
            row.discrepancies.len()
        );
    }
    for note in &table.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}
