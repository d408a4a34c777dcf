//! Plumbing shared by the `kspecial` binary: parameter grids, output
//! records and their CSV/JSON encodings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{EvalResult, PrecisionProfile};

/// Environment variable naming the base precision profile.
pub const PROFILE_ENV: &str = "KSPECIAL_PROFILE";

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub function: String,
    pub inputs: BTreeMap<String, InputValue>,
    pub value: String,
    pub err_estimate: f64,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputValue {
    Integer(u64),
    Real(f64),
    Text(String),
}

impl InputValue {
    fn render(&self) -> String {
        match self {
            InputValue::Integer(n) => n.to_string(),
            InputValue::Real(v) => format_real(*v),
            InputValue::Text(t) => t.clone(),
        }
    }

    /// Inverse of the CSV rendering, given the JSON form as a type hint.
    fn parse_like(text: &str, hint: &InputValue) -> Result<Self> {
        let bad = || Error::domain(format!("cannot parse input value {text:?}"));
        Ok(match hint {
            InputValue::Integer(_) => InputValue::Integer(text.parse().map_err(|_| bad())?),
            InputValue::Real(_) => InputValue::Real(text.parse().map_err(|_| bad())?),
            InputValue::Text(_) => InputValue::Text(text.to_string()),
        })
    }
}

impl OutputRecord {
    pub fn from_eval(function: &str, inputs: BTreeMap<String, InputValue>, r: &EvalResult) -> Self {
        OutputRecord {
            function: function.to_string(),
            inputs,
            value: format_real(r.value),
            err_estimate: r.err_estimate,
            method: r.method.as_str().to_string(),
        }
    }
}

/// Shortest decimal that parses back to the same f64. Plain notation for
/// moderate magnitudes, exponent notation otherwise.
pub fn format_real(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Parses `v`, `v1,v2,…` or `lo:hi:count` (count evenly spaced points, ends
/// included).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::domain(format!("bad value list {text:?}: {why}"));
    let number = |t: &str| -> Result<f64> {
        let v: f64 = t.trim().parse().map_err(|_| bad("not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("values must be finite"))
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, count] => {
            let (lo, hi) = (number(lo)?, number(hi)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| bad("count must be an integer"))?;
            match count {
                0 => Err(bad("count must be at least 1")),
                1 => Ok(vec![lo]),
                _ => Ok((0..count)
                    .map(|i| {
                        if i == count - 1 {
                            hi
                        } else {
                            lo + (hi - lo) * i as f64 / (count - 1) as f64
                        }
                    })
                    .collect()),
            }
        }
        [single] => single.split(',').map(number).collect(),
        _ => Err(bad("use v, v1,v2,… or lo:hi:count")),
    }
}

/// Like [`parse_grid`] but every value must be a non-negative integer.
pub fn parse_integer_grid(text: &str) -> Result<Vec<u32>> {
    parse_grid(text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX) {
                Ok(v as u32)
            } else {
                Err(Error::domain(format!(
                    "expected a non-negative integer, got {v}"
                )))
            }
        })
        .collect()
}

/// Comma-separated vector of reals; the empty string is the empty vector.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("bad number {t:?} in {text:?}")))
        })
        .collect()
}

/// Resolves the precision profile: the named profile from the environment
/// (or the default), then explicit tolerances on top.
pub fn resolve_profile(
    env_value: Option<&str>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
) -> Result<PrecisionProfile> {
    let mut profile = match env_value {
        Some(name) => PrecisionProfile::named(name)?,
        None => PrecisionProfile::default(),
    };
    if let Some(r) = rel_tol {
        profile.rel_tol = r;
    }
    if let Some(a) = abs_tol {
        profile.abs_tol = a;
    }
    profile.validate()?;
    Ok(profile)
}

/// Exit status for an error: 2 for bad inputs, 3 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_domain() {
        2
    } else {
        3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_records<W: Write>(out: W, records: &[OutputRecord], format: Format) -> Result<()> {
    let io = |e: std::io::Error| Error::domain(format!("write failed: {e}"));
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)
                .map_err(|e| Error::domain(format!("JSON encoding failed: {e}")))?;
            writeln!(out).map_err(io)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let names: Vec<String> = records
                .first()
                .map(|r| r.inputs.keys().cloned().collect())
                .unwrap_or_default();
            let csv_err = |e: csv::Error| Error::domain(format!("CSV encoding failed: {e}"));
            let mut header = vec!["function".to_string()];
            header.extend(names.iter().cloned());
            header.extend(["value", "err_estimate", "method"].map(String::from));
            w.write_record(&header).map_err(csv_err)?;
            for r in records {
                let mut row = vec![r.function.clone()];
                row.extend(
                    names
                        .iter()
                        .map(|n| r.inputs.get(n).map(InputValue::render).unwrap_or_default()),
                );
                row.push(r.value.clone());
                row.push(format_real(r.err_estimate));
                row.push(r.method.clone());
                w.write_record(&row).map_err(csv_err)?;
            }
            w.flush().map_err(io)
        }
    }
}

/// Reads back CSV written by [`write_records`]. Input types follow `like`,
/// a record of the same function (CSV itself carries no types).
pub fn read_csv(text: &str, like: &OutputRecord) -> Result<Vec<OutputRecord>> {
    let csv_err = |e: csv::Error| Error::domain(format!("CSV decoding failed: {e}"));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(String::from)
        .collect();
    let n = header.len();
    if n < 4 {
        return Err(Error::domain("CSV header too short"));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err)?;
        let mut inputs = BTreeMap::new();
        for (i, name) in header.iter().enumerate().take(n - 3).skip(1) {
            let hint = like
                .inputs
                .get(name)
                .ok_or_else(|| Error::domain(format!("unexpected column {name}")))?;
            inputs.insert(name.clone(), InputValue::parse_like(&row[i], hint)?);
        }
        out.push(OutputRecord {
            function: row[0].to_string(),
            inputs,
            value: row[n - 3].to_string(),
            err_estimate: row[n - 2]
                .parse()
                .map_err(|_| Error::domain("bad err_estimate"))?,
            method: row[n - 1].to_string(),
        });
    }
    Ok(out)
}
