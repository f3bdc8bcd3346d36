//! Output formatting shared by the CSV and JSON writers.
//!
//! All numbers are written with 9 significant digits; `+∞` is the string
//! `"inf"` in both formats.

use serde_json::Value;

pub const SIG_DIGITS: usize = 9;

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    fmt_sig(x).parse().unwrap_or(x)
}

/// Text form with [`SIG_DIGITS`] significant digits, `inf` for `+∞`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{:.*e}", SIG_DIGITS - 1, x);
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.99999999995 → 10.00000000)
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    let significant = digits.trim_start_matches('0').len();
    if significant > SIG_DIGITS && decimals > 0 {
        format!("{:.*}", decimals - 1, x)
    } else {
        s
    }
}

/// JSON value for a real number, `"inf"` for `+∞`.
pub fn json_number(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(round_sig(x))
            .map(Value::Number)
            .unwrap_or(Value::Null)
    } else {
        Value::String(fmt_sig(x))
    }
}

/// Inverse of [`fmt_sig`] for CSV/JSON readers.
pub fn parse_number(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}
