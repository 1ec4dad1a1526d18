//! Time series container plus the z-normalization and differencing applied
//! before symbolization or distance measurement.

use serde::{Deserialize, Serialize};

use crate::error::{AbbaError, Result};

/// Real-valued samples `t_0..=t_N` on a unit-spaced integer grid.
///
/// Always holds at least two finite values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(AbbaError::invalid(format!(
                "a time series needs at least 2 samples, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(AbbaError::invalid(format!(
                "non-finite sample {} at index {i}",
                values[i]
            )));
        }
        Ok(TimeSeries(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// Number of samples, `N + 1`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The last grid index `N`.
    pub fn last_index(&self) -> usize {
        self.0.len() - 1
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = AbbaError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(values)
    }
}

impl From<TimeSeries> for Vec<f64> {
    fn from(ts: TimeSeries) -> Self {
        ts.0
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Output of [`normalize`]: the z-scored series and the constants needed to undo it.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub series: TimeSeries,
    pub mean: f64,
    /// Population standard deviation of the input; 0 for a constant series.
    pub std: f64,
    /// Set when the input was constant and the output is all zeros.
    pub degenerate: bool,
}

impl Normalized {
    /// Maps normalized values back to the original units.
    pub fn denormalize(&self, values: &[f64]) -> Vec<f64> {
        denormalize(values, self.mean, self.std)
    }
}

pub fn denormalize(values: &[f64], mean: f64, std: f64) -> Vec<f64> {
    values.iter().map(|v| v * std + mean).collect()
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population (divide-by-n) standard deviation.
pub(crate) fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mu = mean(values);
    let ss: f64 = values.iter().map(|v| (v - mu) * (v - mu)).sum();
    (ss / values.len() as f64).sqrt()
}

/// Z-normalizes to zero mean and unit population variance.
///
/// A constant series is not an error: it maps to all zeros with `std == 0`
/// and the `degenerate` flag set.
pub fn normalize(series: &TimeSeries) -> Normalized {
    let values = series.values();
    let mu = mean(values);
    let std = population_std(values);
    if std == 0.0 || !std.is_normal() {
        return Normalized {
            series: TimeSeries(vec![0.0; values.len()]),
            mean: mu,
            std: 0.0,
            degenerate: true,
        };
    }
    let out = values.iter().map(|v| (v - mu) / std).collect();
    Normalized {
        series: TimeSeries(out),
        mean: mu,
        std,
        degenerate: false,
    }
}

/// Z-scores with given constants, e.g. a test series against the statistics
/// of its reference. A zero `std` only centers the values.
pub fn normalize_with(series: &TimeSeries, mean: f64, std: f64) -> TimeSeries {
    let scale = if std > 0.0 { std } else { 1.0 };
    TimeSeries(series.values().iter().map(|v| (v - mean) / scale).collect())
}

/// First differences `x[i+1] - x[i]`; the output is one sample shorter.
pub fn difference(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(AbbaError::invalid(format!(
            "differencing needs at least 2 samples, got {}",
            values.len()
        )));
    }
    Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Inverse of [`difference`]: running sum seeded with `start`.
pub fn cumulative_sum(increments: &[f64], start: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(increments.len() + 1);
    let mut acc = start;
    out.push(acc);
    for d in increments {
        acc += d;
        out.push(acc);
    }
    out
}
