use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::config::OutputFormat;
use super::run::FieldResult;
use crate::error::{Error, Result};

/// 17 significant digits, `inf` / `-inf` / `nan` for non-finite values.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn parse_value(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("cannot parse field value {s:?}")))
}

/// Finite values as JSON numbers, the rest as the strings of [`format_value`].
pub fn value_to_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(format_value(x))
    }
}

pub fn value_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Config(format!("non-float number {n}"))),
        Value::String(s) => parse_value(s),
        other => Err(Error::Config(format!("unexpected field value {other}"))),
    }
}

fn check(result: &FieldResult) -> Result<()> {
    if result.columns.is_empty() {
        return Err(Error::Empty("field has no metric columns".into()));
    }
    if let Some(p) = result.points.iter().find(|p| p.values.len() != result.columns.len()) {
        return Err(Error::LengthMismatch(format!(
            "point {} has {} values for {} columns",
            p.index,
            p.values.len(),
            result.columns.len()
        )));
    }
    Ok(())
}

/// Header `u,v,<columns>,error` and one row per point in grid order.
pub fn to_csv_string(result: &FieldResult) -> Result<String> {
    check(result)?;
    let mut out = String::from("u,v");
    for c in &result.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push_str(",error\n");
    for p in &result.points {
        out.push_str(&format_value(p.u));
        out.push(',');
        out.push_str(&format_value(p.v));
        for &x in &p.values {
            out.push(',');
            out.push_str(&format_value(x));
        }
        out.push(',');
        out.push_str(p.error.as_deref().unwrap_or(""));
        out.push('\n');
    }
    Ok(out)
}

/// A parsed CSV field: metric column names and `(u, v, values, error)` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvField {
    pub columns: Vec<String>,
    pub rows: Vec<(f64, f64, Vec<f64>, Option<String>)>,
}

pub fn parse_csv(text: &str) -> Result<CsvField> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Empty("CSV has no header".into()))?
        .split(',')
        .collect();
    if header.len() < 3 || header[0] != "u" || header[1] != "v" || header[header.len() - 1] != "error" {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let columns: Vec<String> = header[2..header.len() - 1].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(Error::Config(format!("CSV row {line:?} has {} cells", cells.len())));
        }
        let values = cells[2..cells.len() - 1]
            .iter()
            .map(|c| parse_value(c))
            .collect::<Result<Vec<f64>>>()?;
        let err = cells[cells.len() - 1];
        rows.push((
            parse_value(cells[0])?,
            parse_value(cells[1])?,
            values,
            (!err.is_empty()).then(|| err.to_string()),
        ));
    }
    Ok(CsvField { columns, rows })
}

fn metadata(result: &FieldResult) -> Value {
    json!({
        "config": result.config,
        "config_hash": result.config_hash,
        "columns": result.columns,
        "grid": result.config.grid(),
        "point_count": result.points.len(),
        "failures": result.failures(),
    })
}

pub fn to_json_value(result: &FieldResult) -> Result<Value> {
    check(result)?;
    let points: Vec<Value> = result
        .points
        .iter()
        .map(|p| {
            let values: Map<String, Value> = result
                .columns
                .iter()
                .zip(&p.values)
                .map(|(c, &x)| (c.clone(), value_to_json(x)))
                .collect();
            json!({
                "index": p.index,
                "u": p.u,
                "v": p.v,
                "seed": p.seed,
                "values": values,
                "error": p.error,
            })
        })
        .collect();
    Ok(json!({ "metadata": metadata(result), "points": points }))
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    std::fs::rename(&tmp, path).map_err(io)
}

/// `<path>.config.json`, written next to CSV output.
pub fn config_sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

/// Writes the field as CSV (plus the config sidecar) or as one JSON document.
pub fn emit_field(result: &FieldResult, path: &Path, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let csv = to_csv_string(result)?;
            let meta = serde_json::to_string_pretty(&metadata(result)).expect("metadata serializes");
            write_atomic(&config_sidecar(path), format!("{meta}\n").as_bytes())?;
            write_atomic(path, csv.as_bytes())
        }
        OutputFormat::Json => {
            let doc = serde_json::to_string_pretty(&to_json_value(result)?).expect("field serializes");
            write_atomic(path, format!("{doc}\n").as_bytes())
        }
    }
}
