//! Loading series from single-column CSV files and UCR-style archives.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{AbbaError, Result};
use crate::preprocessing::TimeSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    /// One value per line, one series per file.
    Csv,
    /// One series per line: a class label followed by the values, separated
    /// by tabs (or commas when the line has no tab).
    Ucr,
}

impl FromStr for InputFormat {
    type Err = AbbaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "ucr" | "tsv" => Ok(InputFormat::Ucr),
            other => Err(AbbaError::invalid(format!("unknown input format {other:?}"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Csv => "csv",
            InputFormat::Ucr => "ucr",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSeries {
    pub id: String,
    pub label: Option<String>,
    pub series: TimeSeries,
}

pub fn ingest(path: impl AsRef<Path>, format: InputFormat) -> Result<Vec<LabeledSeries>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    match format {
        InputFormat::Csv => parse_csv(&text, &name).map(|s| vec![s]),
        InputFormat::Ucr => parse_ucr(&text, &name),
    }
}

fn parse_value(token: &str, source: &str, line: usize) -> Result<f64> {
    let token = token.trim();
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| AbbaError::Parse {
            source_name: source.to_string(),
            line,
            message: format!("not a finite number: {token:?}"),
        })
}

fn too_short(source: &str, line: usize, n: usize) -> AbbaError {
    AbbaError::Parse {
        source_name: source.to_string(),
        line,
        message: format!("a series needs at least 2 values, found {n}"),
    }
}

/// Parses a single-column file. Blank lines are skipped.
pub fn parse_csv(text: &str, source: &str) -> Result<LabeledSeries> {
    let mut values = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        last_line = line;
        values.push(parse_value(trimmed, source, line)?);
    }
    let n = values.len();
    let series = TimeSeries::new(values).map_err(|_| too_short(source, last_line.max(1), n))?;
    Ok(LabeledSeries {
        id: source.to_string(),
        label: None,
        series,
    })
}

/// Parses a UCR-style archive. Trailing `NaN` padding (used by archives with
/// variable-length series) is dropped.
pub fn parse_ucr(text: &str, source: &str) -> Result<Vec<LabeledSeries>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let sep = if trimmed.contains('\t') { '\t' } else { ',' };
        let mut fields: Vec<&str> = trimmed.split(sep).map(str::trim).collect();
        while fields.last().is_some_and(|f| f.eq_ignore_ascii_case("nan")) {
            fields.pop();
        }
        let label = fields.first().copied().unwrap_or_default().to_string();
        let values = fields
            .iter()
            .skip(1)
            .map(|t| parse_value(t, source, line))
            .collect::<Result<Vec<f64>>>()?;
        let n = values.len();
        let series = TimeSeries::new(values).map_err(|_| too_short(source, line, n))?;
        out.push(LabeledSeries {
            id: format!("{source}:{line}"),
            label: Some(label),
            series,
        });
    }
    Ok(out)
}

/// Writes series in the UCR layout (label, tab-separated values).
pub fn write_ucr(series: &[LabeledSeries]) -> String {
    let mut out = String::new();
    for s in series {
        out.push_str(s.label.as_deref().unwrap_or("0"));
        for v in s.series.values() {
            out.push('\t');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Writes one value per line.
pub fn write_csv(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 20);
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
