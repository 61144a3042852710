//! Amplitude tokens: decimals, `p/q`, `sqrt(p/q)` and `[re, im]` pairs.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::Value;

use superinfo_core::ensembles::Amplitude;
use superinfo_core::label::{decimal_digits, parse_rational, rational_to_f64, snap_rational};

/// Largest denominator accepted when a decimal amplitude is snapped to the
/// square root of a rational.
const SNAP_DENOMINATOR: u64 = 10_000;

/// A real token and its exact square.
#[derive(Debug, Clone, PartialEq)]
pub struct RealToken {
    pub value: f64,
    pub square: BigRational,
}

pub fn parse_real(text: &str) -> Result<RealToken, String> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|s| s.strip_suffix(')')) {
        let p = parse_rational(inner).map_err(|e| e.to_string())?;
        if p.is_negative() {
            return Err(format!("square root of a negative number in `{text}`"));
        }
        let v = rational_to_f64(&p).sqrt();
        return Ok(RealToken { value: if neg { -v } else { v }, square: p });
    }
    let r = parse_rational(t).map_err(|e| e.to_string())?;
    let square = &r * &r;
    Ok(RealToken { value: rational_to_f64(&r), square })
}

/// Complex amplitude from a JSON number, a token string, or a `[re, im]` pair.
pub fn parse_amplitude(v: &Value) -> Result<Complex64, String> {
    let real = |v: &Value| -> Result<f64, String> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| format!("not a finite number: {n}")),
            Value::String(s) => parse_real(s).map(|t| t.value),
            other => Err(format!("expected a number or a string, found {other}")),
        }
    };
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(real(&pair[0])?, real(&pair[1])?)),
        Value::Array(pair) => Err(format!("complex amplitudes are [re, im] pairs, found {} entries", pair.len())),
        other => Ok(Complex64::new(real(other)?, 0.0)),
    }
}

/// Probability of a decimal amplitude, snapped to a nearby simple rational
/// when the decimal is a rounded square root.
fn decimal_probability(text: &str, square: &BigRational) -> Option<BigRational> {
    if square.denom() <= &BigInt::from(SNAP_DENOMINATOR) {
        return Some(square.clone());
    }
    let digits = decimal_digits(text);
    if digits == 0 {
        return None;
    }
    let p = rational_to_f64(square);
    let radius = 2.0 * p.sqrt() * 10f64.powi(-(digits as i32)) + 1e-15;
    // A non-zero amplitude never snaps to an impossible outcome.
    snap_rational(p, radius, SNAP_DENOMINATOR).filter(|r| r.is_positive())
}

/// Amplitude list for frequency computations. Every token contributes its
/// probability exactly when one can be found; if the exact probabilities do
/// not sum to one the raw values are used instead, rescaled to unit norm when
/// they miss it by no more than decimal rounding (`1e-6`).
pub fn parse_amplitude_list(text: &str) -> Result<Vec<Amplitude>, String> {
    let tokens: Vec<&str> = split_tokens(text);
    if tokens.is_empty() {
        return Err("no amplitudes given".into());
    }
    let mut exact = Vec::with_capacity(tokens.len());
    let mut raw = Vec::with_capacity(tokens.len());
    for tok in &tokens {
        let r = parse_real(tok)?;
        let p = if tok.trim().trim_start_matches(['-', '+']).starts_with("sqrt(") {
            Some(r.square.clone())
        } else {
            decimal_probability(tok, &r.square)
        };
        exact.push(p);
        raw.push(r.value);
    }
    let all: Option<Vec<BigRational>> = exact.into_iter().collect();
    if let Some(ps) = all {
        let sum: BigRational = ps.iter().sum();
        if sum == BigRational::from_integer(1.into()) {
            return Ok(ps.into_iter().map(Amplitude::Sqrt).collect());
        }
    }
    let norm2: f64 = raw.iter().map(|v| v * v).sum();
    let scale = if (norm2 - 1.0).abs() <= 1e-6 { norm2.sqrt() } else { 1.0 };
    Ok(raw.into_iter().map(|v| Amplitude::Complex(Complex64::new(v / scale, 0.0))).collect())
}

/// Split a comma list, keeping commas inside parentheses.
fn split_tokens(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = text[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out.retain(|t| !t.is_empty());
    out
}

/// Comma list of exact rationals (`1/3`, `0.25`, `-2`).
pub fn parse_rational_list(text: &str) -> Result<Vec<BigRational>, String> {
    let items: Vec<BigRational> =
        split_tokens(text).into_iter().map(|t| parse_rational(t).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}
