//! Deterministic text output: floats at 17 significant digits, hand-built
//! CSV and JSON so schemas are stable byte-for-byte.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// Formats a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// A JSON value assembled with deterministic field order and float format.
pub enum Json {
    Null,
    Bool(bool),
    Num(f64),
    Int(i64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Json::Num(x) => {
                let _ = write!(out, "{}", fmt_f64(*x));
            }
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Str(s) => {
                let _ = write!(out, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push_str("{\n");
                let pad = "  ".repeat(indent + 1);
                for (i, (key, value)) in fields.iter().enumerate() {
                    let _ = write!(out, "{pad}\"{key}\": ");
                    value.write(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                let _ = write!(out, "{}}}", "  ".repeat(indent));
            }
        }
    }
}

/// Writes rows as CSV with the exact header given.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> io::Result<()> {
    let mut out = String::with_capacity(rows.len() * 120 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    fs::write(path, out)
}

pub fn write_text(path: &Path, content: &str) -> io::Result<()> {
    fs::write(path, content)
}
