//! Text formats: polynomials, CF word files, raw letter arrays.
//!
//! A word file is either JSON `{"a0": int, "quotients": [int, ...]}` (optional
//! `"terminated": bool`) or one integer per line with `a0` first. Blank lines
//! and `#` comments are skipped in the line form. Diagnostics carry line numbers.

use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::Value;

use crate::cf::CfExpansion;
use crate::error::{Error, Result};
use crate::json;
use crate::poly::IntPolynomial;
use crate::words::Word;

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

/// Line of the first occurrence of `needle` in `text` (1-based), or 1.
fn line_of(text: &str, needle: &str) -> usize {
    text.find(needle).map(|i| text[..i].matches('\n').count() + 1).unwrap_or(1)
}

pub fn parse_word_file(text: &str) -> Result<CfExpansion> {
    if text.trim_start().starts_with('{') {
        parse_word_json(text)
    } else {
        parse_word_lines(text)
    }
}

fn parse_word_json(text: &str) -> Result<CfExpansion> {
    let v: Value = serde_json::from_str(text).map_err(json_err)?;
    let obj = v.as_object().ok_or_else(|| err(1, "expected a JSON object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "a0" | "quotients" | "terminated") {
            return Err(err(line_of(text, &format!("\"{key}\"")), format!("unknown key '{key}'")));
        }
    }
    let a0_line = line_of(text, "\"a0\"");
    let a0 = obj
        .get("a0")
        .ok_or_else(|| err(1, "missing key 'a0'"))
        .and_then(|v| json::to_bigint(v).ok_or_else(|| err(a0_line, "a0 must be an integer")))?;
    let q_line = line_of(text, "\"quotients\"");
    let arr = obj
        .get("quotients")
        .ok_or_else(|| err(1, "missing key 'quotients'"))?
        .as_array()
        .ok_or_else(|| err(q_line, "quotients must be an array"))?;
    let mut quotients = Vec::with_capacity(arr.len());
    for (i, v) in arr.iter().enumerate() {
        let a = json::to_bigint(v).ok_or_else(|| err(q_line, format!("quotients[{i}] is not an integer")))?;
        if !a.is_positive() {
            return Err(err(q_line, format!("quotients[{i}] = {a} must be at least 1")));
        }
        quotients.push(a);
    }
    let terminated = match obj.get("terminated") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(err(line_of(text, "\"terminated\""), "terminated must be a boolean")),
    };
    CfExpansion::from_word(a0, quotients, terminated)
}

fn parse_word_lines(text: &str) -> Result<CfExpansion> {
    let mut a0 = None;
    let mut quotients = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n: BigInt = line.parse().map_err(|_| err(i + 1, format!("invalid integer '{line}'")))?;
        if a0.is_none() {
            a0 = Some(n);
        } else if !n.is_positive() {
            return Err(err(i + 1, format!("partial quotient {n} must be at least 1")));
        } else {
            quotients.push(n);
        }
    }
    let a0 = a0.ok_or_else(|| Error::Parse("empty word file".into()))?;
    CfExpansion::from_word(a0, quotients, false)
}

/// Comma-separated text, or a JSON integer array, lowest degree first.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial> {
    let t = text.trim();
    let p = if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(json_err)?;
        poly_from_value(&v)?
    } else {
        IntPolynomial::parse(t)?
    };
    if p.degree() == 0 {
        return Err(Error::Parse(format!("polynomial '{t}' has no roots (constant)")));
    }
    Ok(p)
}

pub fn poly_from_value(v: &Value) -> Result<IntPolynomial> {
    match v {
        Value::String(s) => parse_polynomial(s),
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json::to_bigint(c)
                        .ok_or_else(|| Error::Parse(format!("coefficient {} is not an integer", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IntPolynomial::new(coeffs))
        }
        _ => Err(Error::Parse("polynomial must be an integer array or a comma-separated string".into())),
    }
}

/// Letters from either a word file or a raw JSON array of positive integers.
/// For a word file the letters are the partial quotients `a_1, a_2, ...`.
pub fn parse_letters(text: &str) -> Result<Word> {
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(text).map_err(json_err)?;
        let arr = v.as_array().ok_or_else(|| err(1, "expected an array"))?;
        return arr
            .iter()
            .enumerate()
            .map(|(i, x)| match x.as_u64() {
                Some(a) if a >= 1 => Ok(a),
                _ => Err(Error::Parse(format!("letter {i} = {x} is not a positive integer"))),
            })
            .collect();
    }
    parse_word_file(text)?.letters_u64()
}
