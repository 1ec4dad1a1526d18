//! Standard-normal quantiles and the derived breakpoint tables.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{AbbaError, Result};

fn standard() -> Normal {
    Normal::standard()
}

/// `Φ⁻¹(p)` for `0 < p < 1`.
pub fn normal_quantile(p: f64) -> f64 {
    standard().inverse_cdf(p)
}

/// The `k - 1` ascending standard-normal quantiles at `i / k` that cut the
/// bell curve into `k` equal-probability regions.
pub fn gaussian_breakpoints(k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(AbbaError::invalid(format!("need at least 2 regions, got {k}")));
    }
    Ok((1..k)
        .map(|i| {
            let q = normal_quantile(i as f64 / k as f64);
            // Pin the median to an exact zero.
            if 2 * i == k {
                0.0
            } else {
                q
            }
        })
        .collect())
}

/// Region index of `value`: the number of breakpoints at or below it.
pub fn region_of(value: f64, breakpoints: &[f64]) -> usize {
    breakpoints.partition_point(|&b| b <= value)
}

/// How a region of the real line is represented when reconstructing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Representative {
    /// `Φ⁻¹((i + 0.5) / k)`, the probability midpoint of region `i`.
    #[default]
    ProbabilityMidpoint,
    /// Mean of the standard normal restricted to region `i`.
    RegionMean,
}

impl Representative {
    /// Representative of region `i` out of `k` for the standard normal.
    pub fn value(self, i: usize, k: usize) -> f64 {
        match self {
            Representative::ProbabilityMidpoint => {
                if 2 * i + 1 == k {
                    0.0
                } else {
                    normal_quantile((i as f64 + 0.5) / k as f64)
                }
            }
            Representative::RegionMean => {
                let n = standard();
                let lo = if i == 0 {
                    f64::NEG_INFINITY
                } else {
                    normal_quantile(i as f64 / k as f64)
                };
                let hi = if i + 1 == k {
                    f64::INFINITY
                } else {
                    normal_quantile((i + 1) as f64 / k as f64)
                };
                let pdf = |x: f64| if x.is_finite() { n.pdf(x) } else { 0.0 };
                // Each region carries probability 1/k.
                (pdf(lo) - pdf(hi)) * k as f64
            }
        }
    }
}
