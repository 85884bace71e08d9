//! JSON and CSV rendering with every float at 17 significant digits.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::simulator::ExperimentResult;

pub const CSV_HEADER: [&str; 16] = [
    "N",
    "M",
    "alpha",
    "sector",
    "t",
    "g_sq",
    "empirical_mean",
    "exact_mean",
    "empirical_variance",
    "normalized_variance",
    "predicted_sigma_sq",
    "skewness",
    "excess_kurtosis",
    "ks_statistic",
    "seed",
    "wall_time_ms",
];

/// `x` with 17 significant digits; round-trips every finite double.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        // Keep the sign of negative zero out of the output.
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

fn opt17(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() && x.is_finite() => out.push_str(&fmt17(x)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Pretty JSON; non-finite floats become `null` as in `serde_json`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// One CSV row per matrix size, header first.
pub fn write_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Config(format!("writing CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    let pred = &result.prediction;
    for row in &result.rows {
        let record = [
            row.n.to_string(),
            row.replicates.to_string(),
            fmt17(result.config.alpha),
            pred.sector.as_str().to_string(),
            fmt17(pred.rate_exponent),
            opt17(row.g_sq),
            fmt17(row.empirical_mean),
            opt17(row.exact_mean),
            fmt17(row.empirical_variance),
            opt17(row.normalized_variance),
            fmt17(pred.sigma_sq),
            opt17(row.skewness),
            opt17(row.excess_kurtosis),
            opt17(row.ks_statistic),
            result.config.master_seed.to_string(),
            format!("{:.3}", row.wall_time_ms),
        ];
        w.write_record(&record).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Config(format!("writing CSV: {e}")))?;
    Ok(())
}
