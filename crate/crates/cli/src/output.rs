//! Text encodings of integer sequences: b-files, CSV and JSON.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value};

/// `"n value"` per line, newline-terminated, `n` counting from `offset`.
pub fn write_bfile<T: ToString>(values: &[T], offset: u64) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{} {}", offset + i as u64, v.to_string());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfileError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for BfileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for BfileError {}

/// Parses a b-file. Blank lines and `#` comments are skipped; indices must
/// be consecutive.
pub fn parse_bfile(text: &str) -> Result<(u64, Vec<BigInt>), BfileError> {
    let mut offset = None;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| BfileError { line: i + 1, message };
        let mut parts = line.split_whitespace();
        let (Some(n), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected \"n value\", got {line:?}")));
        };
        let n: u64 = n.parse().map_err(|_| err(format!("bad index {n:?}")))?;
        let v: BigInt = v.parse().map_err(|_| err(format!("bad value {v:?}")))?;
        let start = *offset.get_or_insert(n);
        if n != start + values.len() as u64 {
            return Err(err(format!("index {n} out of sequence")));
        }
        values.push(v);
    }
    Ok((offset.unwrap_or(0), values))
}

/// CSV with a header row.
pub fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Integers wider than `u64` are emitted as decimal strings.
pub fn big(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn sequence_json(name: &str, offset: u64, values: &[u64], extra: Value) -> Value {
    let mut obj = json!({
        "sequence": name,
        "offset": offset,
        "values": values,
    });
    if let (Value::Object(o), Value::Object(e)) = (&mut obj, extra) {
        o.extend(e);
    }
    obj
}
