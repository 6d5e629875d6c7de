//! Report formatting: compact JSON with sorted keys, or aligned text.

use serde_json::{Map, Value};

/// `v` rounded to 12 significant digits, with `-0` folded to `0`.
pub fn float(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float");
    let r = if r == 0.0 { 0.0 } else { r };
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

pub fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

/// One `key  value` line per entry. Arrays of objects become indented
/// rows below their key.
pub fn text(v: &Value) -> String {
    let empty = Map::new();
    let map = v.as_object().unwrap_or(&empty);
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in map {
        match v {
            Value::Array(items) if items.iter().any(Value::is_object) => {
                out.push_str(&format!("{k}:\n"));
                for item in items {
                    out.push_str(&format!("  - {}\n", scalar(item)));
                }
            }
            Value::Array(items) if items.iter().any(Value::is_array) => {
                out.push_str(&format!("{k}:\n"));
                for item in items {
                    out.push_str(&format!("  {}\n", scalar(item)));
                }
            }
            _ => out.push_str(&format!("{k:width$}  {}\n", scalar(v))),
        }
    }
    out
}
