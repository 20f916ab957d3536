//! Output formatting: 12-significant-digit decimal rendering and the JSON
//! envelope shared by every subcommand.

use ineq::{MeasureParams, MeasureReport};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Format::Plain),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv, json, or plain)")),
        }
    }
}

/// Renders at 12 significant digits. Exact zero prints as `0`; the decimal
/// count adapts to the magnitude so twelve digits always carry information.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let text = format!("{v:.decimals$}");
    // Rounding can carry into the next decade (0.99999999999999 -> "1.0..."),
    // which would show thirteen digits; reformat one digit shorter.
    let rounded: f64 = text.parse().expect("fixed-point text parses");
    if decimals > 0 && rounded.abs() >= 10f64.powi(exp + 1) {
        let decimals = (11 - (exp + 1)).max(0) as usize;
        return format!("{v:.decimals$}");
    }
    text
}

/// The top-level envelope: `{schema_version, command, results}`.
pub fn envelope(command: &str, results: Vec<Value>) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "results": results,
    });
    serde_json::to_string_pretty(&doc).expect("envelope serializes")
}

/// A measure report as a JSON result entry. The raw f64 round-trips
/// losslessly; `display` carries the 12-digit rendering.
pub fn measure_json(r: &MeasureReport) -> Value {
    let mut obj = json!({
        "kind": "measure",
        "measure": r.measure.to_string(),
        "algorithm": r.algorithm.to_string(),
        "n": r.n,
        "value": r.value,
        "display": sig12(r.value),
    });
    match r.params {
        Some(MeasureParams::Exponent(p)) => {
            obj["p"] = json!(p.to_string());
        }
        Some(MeasureParams::Iid(params)) => {
            obj["alpha"] = json!(params.alpha());
            obj["beta"] = json!(params.beta());
        }
        None => {}
    }
    obj
}
