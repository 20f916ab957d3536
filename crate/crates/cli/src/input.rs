//! Data ingestion: inline vector literals, CSV (optional single header
//! row), and JSON (array or object of columns), from a file or stdin.

use std::io::Read;
use std::path::Path;

use ineq::{Distribution, Error};

use crate::error::CliError;

/// Parsed entries, each labeled with where it came from for diagnostics.
#[derive(Debug)]
pub struct ParsedInput {
    pub entries: Vec<f64>,
    origins: Vec<String>,
}

impl ParsedInput {
    /// Validates into a `Distribution`, mapping entry-level failures back
    /// to their source labels.
    pub fn into_distribution(self) -> Result<Distribution, CliError> {
        Distribution::new(self.entries).map_err(|e| {
            let at = |index: usize| {
                self.origins.get(index).cloned().unwrap_or_else(|| format!("entry {index}"))
            };
            match e {
                Error::NegativeEntry { index, value } => {
                    CliError::input(format!("{}: negative entry ({value})", at(index)))
                }
                Error::NotFinite { index, value } => {
                    CliError::input(format!("{}: entry is not finite ({value})", at(index)))
                }
                Error::Empty => CliError::input("input contains no data values"),
                Error::AllZero => {
                    CliError::input("all entries are zero; measures need a positive total")
                }
                other => CliError::input(other.to_string()),
            }
        })
    }
}

/// Parses a comma-separated inline literal such as `0,0,1`.
pub fn parse_inline(text: &str, label: &str) -> Result<ParsedInput, CliError> {
    let mut entries = Vec::new();
    let mut origins = Vec::new();
    for (i, token) in text.split(',').enumerate() {
        let t = token.trim();
        let origin = format!("{label} value {}", i + 1);
        if t.is_empty() {
            return Err(CliError::input(format!("{origin}: empty value")));
        }
        let v: f64 = t
            .parse()
            .map_err(|_| CliError::input(format!("{origin}: cannot parse '{t}' as a number")))?;
        entries.push(v);
        origins.push(origin);
    }
    Ok(ParsedInput { entries, origins })
}

/// Reads a file (or stdin for `-`) and parses it as JSON or CSV.
pub fn parse_file(path: &Path, column: Option<&str>) -> Result<ParsedInput, CliError> {
    let name = path.display().to_string();
    let text = if name == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{name}: {e}")))?
    };
    let looks_json = name.ends_with(".json")
        || matches!(text.trim_start().chars().next(), Some('[') | Some('{'));
    if looks_json {
        parse_json(&text, &name, column)
    } else {
        parse_csv(&text, &name, column)
    }
}

fn parse_json(text: &str, name: &str, column: Option<&str>) -> Result<ParsedInput, CliError> {
    let doc: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("{name}: invalid JSON: {e}")))?;
    let number = |v: &serde_json::Value, origin: &str| -> Result<f64, CliError> {
        v.as_f64()
            .ok_or_else(|| CliError::input(format!("{origin}: expected a number, found {v}")))
    };
    match doc {
        serde_json::Value::Array(items) => {
            let mut entries = Vec::new();
            let mut origins = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let origin = format!("{name}: element {}", i + 1);
                entries.push(number(item, &origin)?);
                origins.push(origin);
            }
            Ok(ParsedInput { entries, origins })
        }
        serde_json::Value::Object(map) => {
            let key = match column {
                Some(c) => {
                    if !map.contains_key(c) {
                        return Err(CliError::input(format!(
                            "{name}: no column '{c}'; available: {}",
                            keys(&map)
                        )));
                    }
                    c.to_string()
                }
                None if map.len() == 1 => map.keys().next().unwrap().clone(),
                None => {
                    return Err(CliError::input(format!(
                        "{name}: multiple columns; pick one with --column (available: {})",
                        keys(&map)
                    )))
                }
            };
            let items = map[&key].as_array().ok_or_else(|| {
                CliError::input(format!("{name}: column '{key}' must be an array of numbers"))
            })?;
            let mut entries = Vec::new();
            let mut origins = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let origin = format!("{name}: {key}[{}]", i + 1);
                entries.push(number(item, &origin)?);
                origins.push(origin);
            }
            Ok(ParsedInput { entries, origins })
        }
        other => Err(CliError::input(format!(
            "{name}: expected a JSON array or object of columns, found {other}"
        ))),
    }
}

fn keys(map: &serde_json::Map<String, serde_json::Value>) -> String {
    map.keys().cloned().collect::<Vec<_>>().join(", ")
}

/// Comma-separated values, `.` decimal separator, optional single header
/// row, blank rows skipped with a warning on stderr.
fn parse_csv(text: &str, name: &str, column: Option<&str>) -> Result<ParsedInput, CliError> {
    // (physical 1-based row number, fields)
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row_no = i + 1;
        if line.trim().is_empty() {
            eprintln!("warning: {name}: skipping blank row {row_no}");
            continue;
        }
        rows.push((row_no, line.split(',').map(|f| f.trim().to_string()).collect()));
    }
    if rows.is_empty() {
        return Err(CliError::input(format!("{name}: no data rows")));
    }

    let first_is_header = !rows[0].1.iter().all(|f| f.parse::<f64>().is_ok());
    let (header, data) = if first_is_header {
        (Some(rows[0].1.as_slice()), &rows[1..])
    } else {
        (None, &rows[..])
    };

    let col_index = match (header, column) {
        (None, None) => {
            if rows[0].1.len() != 1 {
                return Err(CliError::input(format!(
                    "{name}: headerless input must have a single column; row {} has {} \
                     (add a header row and select with --column)",
                    rows[0].0,
                    rows[0].1.len()
                )));
            }
            0
        }
        (None, Some(c)) => {
            return Err(CliError::input(format!(
                "{name}: --column '{c}' given but the input has no header row"
            )))
        }
        (Some(h), None) => {
            if h.len() != 1 {
                return Err(CliError::input(format!(
                    "{name}: multiple columns; pick one with --column (available: {})",
                    h.join(", ")
                )));
            }
            0
        }
        (Some(h), Some(c)) => h.iter().position(|f| f == c).ok_or_else(|| {
            CliError::input(format!("{name}: no column '{c}'; available: {}", h.join(", ")))
        })?,
    };
    let col_name = header.map(|h| h[col_index].clone());

    if data.is_empty() {
        return Err(CliError::input(format!("{name}: no data rows after the header")));
    }
    let expected_fields = header.map_or(1, <[String]>::len);
    let mut entries = Vec::new();
    let mut origins = Vec::new();
    for (row_no, fields) in data {
        if fields.len() != expected_fields {
            return Err(CliError::input(format!(
                "{name}: row {row_no} has {} field(s), expected {expected_fields}",
                fields.len()
            )));
        }
        let field = &fields[col_index];
        let origin = match &col_name {
            Some(c) => format!("{name}: row {row_no}, column '{c}'"),
            None => format!("{name}: row {row_no}"),
        };
        let v: f64 = field.parse().map_err(|_| {
            CliError::input(format!("{origin}: cannot parse '{field}' as a number"))
        })?;
        entries.push(v);
        origins.push(origin);
    }
    Ok(ParsedInput { entries, origins })
}
