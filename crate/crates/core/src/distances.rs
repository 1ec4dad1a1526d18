//! Lock-step and elastic distances used to score reconstructions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AbbaError, Result};
use crate::preprocessing::difference;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Euclid,
    Dtw,
    EuclidDiff,
    DtwDiff,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 4] = [
        DistanceKind::Euclid,
        DistanceKind::Dtw,
        DistanceKind::EuclidDiff,
        DistanceKind::DtwDiff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Euclid => "euclid",
            DistanceKind::Dtw => "dtw",
            DistanceKind::EuclidDiff => "euclid_diff",
            DistanceKind::DtwDiff => "dtw_diff",
        }
    }

    pub fn is_differenced(self) -> bool {
        matches!(self, DistanceKind::EuclidDiff | DistanceKind::DtwDiff)
    }

    /// Evaluates this measure between two series.
    pub fn measure(self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            DistanceKind::Euclid => euclid(a, b),
            DistanceKind::Dtw => dtw(a, b),
            DistanceKind::EuclidDiff | DistanceKind::DtwDiff => differenced(self, a, b),
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = AbbaError;

    fn from_str(s: &str) -> Result<Self> {
        DistanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AbbaError::invalid(format!("unknown distance {s:?}")))
    }
}

pub fn euclid(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(AbbaError::invalid(format!(
            "euclidean distance needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// Unconstrained dynamic time warping with squared pointwise cost and a final
/// square root, so the diagonal path reproduces [`euclid`].
pub fn dtw(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(AbbaError::invalid("dtw needs two non-empty series"));
    }
    // Keep the shorter series along the row so the two rows stay small.
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let m = short.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for (i, &x) in long.iter().enumerate() {
        for (j, &y) in short.iter().enumerate() {
            let d = (x - y) * (x - y);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j - 1].min(prev[j]).min(cur[j - 1]),
            };
            cur[j] = d + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m - 1].sqrt())
}

/// Applies the base measure of `kind` to the first differences of both series.
pub fn differenced(kind: DistanceKind, a: &[f64], b: &[f64]) -> Result<f64> {
    let da = difference(a)?;
    let db = difference(b)?;
    match kind {
        DistanceKind::Euclid | DistanceKind::EuclidDiff => euclid(&da, &db),
        DistanceKind::Dtw | DistanceKind::DtwDiff => dtw(&da, &db),
    }
}
