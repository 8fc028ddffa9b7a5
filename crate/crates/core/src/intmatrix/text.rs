//! Matrix interchange: `{"n": .., "rows": [[..], ..]}` JSON, or plain
//! whitespace-separated rows (one per line, `#` comments allowed).

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::NonNegIntMatrix;
use crate::error::ParseError;

/// Auto-detects JSON (leading `{`) versus whitespace rows.
pub fn parse_matrix(input: &str) -> Result<NonNegIntMatrix, ParseError> {
    if input.trim_start().starts_with('{') {
        matrix_from_json(input)
    } else {
        matrix_from_rows_text(input)
    }
}

pub fn matrix_from_json(input: &str) -> Result<NonNegIntMatrix, ParseError> {
    let doc: Value = serde_json::from_str(input)?;
    let obj = doc.as_object().ok_or_else(|| ParseError::Schema("expected a JSON object".into()))?;
    let rows = obj
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Schema("missing array field `rows`".into()))?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| ParseError::Schema(format!("row {} is not an array", i + 1)))?;
        let entries = row.iter().map(|v| json_integer(v, i + 1)).collect::<Result<Vec<_>, _>>()?;
        parsed.push(entries);
    }
    if let Some(n) = obj.get("n") {
        let n = n.as_u64().ok_or_else(|| ParseError::Schema("field `n` must be a nonnegative integer".into()))?;
        if n as usize != parsed.len() {
            return Err(ParseError::DeclaredSize { declared: n as usize, found: parsed.len() });
        }
    }
    Ok(NonNegIntMatrix::from_rows(&parsed)?)
}

fn json_integer(v: &Value, line: usize) -> Result<BigInt, ParseError> {
    let bad = || ParseError::Integer { line, token: v.to_string() };
    match v {
        Value::Number(num) => {
            if let Some(u) = num.as_u64() {
                Ok(BigInt::from(u))
            } else if let Some(i) = num.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(bad())
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

pub fn matrix_from_rows_text(input: &str) -> Result<NonNegIntMatrix, ParseError> {
    let mut rows = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigInt>().map_err(|_| ParseError::Integer { line: lineno + 1, token: tok.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(NonNegIntMatrix::from_rows(&rows)?)
}

fn entry_value(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(u) => json!(u),
        None => json!(v.to_string()),
    }
}

pub fn matrix_to_json_value(a: &NonNegIntMatrix) -> Value {
    let rows: Vec<Value> = a.rows().map(|r| Value::Array(r.iter().map(entry_value).collect())).collect();
    json!({ "n": a.dim(), "rows": rows })
}

pub fn matrix_to_json(a: &NonNegIntMatrix) -> String {
    matrix_to_json_value(a).to_string()
}
