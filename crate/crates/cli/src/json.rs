//! Byte-stable JSON: sorted keys, floats rounded to 12 significant digits.

use chrono::NaiveDate;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round to [`SIGNIFICANT_DIGITS`]; negative zero becomes zero and
/// non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn date_or_null(d: Option<NaiveDate>) -> Value {
    d.map_or(Value::Null, |d| Value::String(d.to_string()))
}

/// Pretty-printed document with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(num(0.1234567890123456).to_string(), "0.123456789012");
        assert_eq!(num(-0.0).to_string(), "0.0");
        assert_eq!(num(-1e-30).to_string(), "-1e-30");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(2.0).to_string(), "2.0");
    }

    #[test]
    fn keys_sorted() {
        let v = serde_json::json!({ "b": 1, "a": { "z": 1, "c": 2 } });
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":{"c":2,"z":1},"b":1}"#);
    }
}
