//! Serialization: numbers rounded to 12 significant digits, JSON with sorted
//! keys, CSV with a header row.

use serde_json::{Number, Value};

use crate::args::Format;
use crate::commands::Report;

/// Rounds every non-integer number to 12 significant digits.
pub fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_u64() || n.is_i64()) => {
            let x = n.as_f64().expect("float");
            let r: f64 = format!("{x:.11e}").parse().expect("round trip");
            *n = Number::from_f64(r).expect("finite");
        }
        Value::Array(a) => a.iter_mut().for_each(round_numbers),
        Value::Object(o) => o.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => o.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        _ => out.push((prefix.to_string(), v.clone())),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(command: &str, seed: u64, params: Value, report: Report, format: Format) -> Result<Vec<u8>, String> {
    let mut doc = serde_json::json!({
        "command": command,
        "seed": seed,
        "params": params,
        "result": report.result,
    });
    round_numbers(&mut doc);
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| e.to_string())?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| e.to_string();
            match report.table {
                Some((header, mut rows)) => {
                    w.write_record(&header).map_err(io)?;
                    for row in &mut rows {
                        row.iter_mut().for_each(round_numbers);
                        w.write_record(row.iter().map(cell)).map_err(io)?;
                    }
                }
                None => {
                    let mut pairs = Vec::new();
                    flatten("", &doc["result"], &mut pairs);
                    w.write_record(["key", "value"]).map_err(io)?;
                    for (k, v) in pairs {
                        w.write_record([k, cell(&v)]).map_err(io)?;
                    }
                }
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}
