//! Performance profiles: for each algorithm, the fraction of problems on
//! which it came within a factor `θ` of the best algorithm.

use crate::error::{AbbaError, Result};

/// Step function `p(θ)` of one algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileCurve {
    pub algorithm: String,
    /// Performance ratios per problem, sorted ascending. Infinite when the
    /// best algorithm was exact and this one was not.
    ratios: Vec<f64>,
}

impl ProfileCurve {
    /// Fraction of problems with ratio `<= theta`.
    pub fn p(&self, theta: f64) -> f64 {
        let hits = self.ratios.partition_point(|&r| r <= theta);
        hits as f64 / self.ratios.len() as f64
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }
}

/// Per-row ratio of each entry to the row minimum. Rows whose minimum is 0
/// give ratio 1 to the exact entries and infinity to the rest.
pub fn performance_ratios(row: &[f64]) -> Vec<f64> {
    let best = row.iter().copied().fold(f64::INFINITY, f64::min);
    row.iter()
        .map(|&e| {
            if e == best {
                1.0
            } else if best == 0.0 {
                f64::INFINITY
            } else {
                e / best
            }
        })
        .collect()
}

/// Builds one profile curve per column of `rows`.
pub fn performance_profile(rows: &[Vec<f64>], algorithms: &[String]) -> Result<Vec<ProfileCurve>> {
    if rows.is_empty() || algorithms.is_empty() {
        return Err(AbbaError::invalid("performance profile of an empty matrix"));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != algorithms.len() {
            return Err(AbbaError::invalid(format!(
                "row {i} has {} entries for {} algorithms",
                row.len(),
                algorithms.len()
            )));
        }
        if row.iter().any(|e| e.is_nan() || *e < 0.0 || e.is_infinite()) {
            return Err(AbbaError::invalid(format!(
                "row {i} has a negative or non-finite entry"
            )));
        }
    }
    let ratio_rows: Vec<Vec<f64>> = rows.iter().map(|r| performance_ratios(r)).collect();
    Ok(algorithms
        .iter()
        .enumerate()
        .map(|(a, name)| {
            let mut ratios: Vec<f64> = ratio_rows.iter().map(|r| r[a]).collect();
            ratios.sort_by(f64::total_cmp);
            ProfileCurve {
                algorithm: name.clone(),
                ratios,
            }
        })
        .collect())
}

/// Tabulates the curves at every finite ratio where some curve steps, as CSV
/// with a `theta` column followed by one column per algorithm.
pub fn profile_csv(curves: &[ProfileCurve]) -> String {
    let mut thetas: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.ratios.iter().copied())
        .filter(|r| r.is_finite())
        .chain(std::iter::once(1.0))
        .collect();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();

    let mut out = String::from("theta");
    for c in curves {
        out.push(',');
        out.push_str(&c.algorithm);
    }
    out.push('\n');
    for theta in thetas {
        out.push_str(&theta.to_string());
        for c in curves {
            out.push(',');
            out.push_str(&c.p(theta).to_string());
        }
        out.push('\n');
    }
    out
}
