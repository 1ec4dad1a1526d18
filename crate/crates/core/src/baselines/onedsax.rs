//! 1d-SAX: per-segment least-squares lines, with the line mean and slope
//! quantized separately and combined into one symbol.

use super::normal::{gaussian_breakpoints, region_of, Representative};
use crate::digitization::{symbol_for, symbol_index};
use crate::error::{AbbaError, Result};

/// Default slope variance numerator: slopes are modelled as `N(0, 0.03 / w)`.
pub const DEFAULT_SLOPE_VARIANCE_SCALE: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneDSaxConfig {
    pub segment_len: usize,
    pub k_mean: usize,
    pub k_slope: usize,
    pub slope_variance_scale: f64,
    pub representative: Representative,
}

impl OneDSaxConfig {
    pub fn new(segment_len: usize, k_mean: usize, k_slope: usize) -> Result<Self> {
        if segment_len == 0 {
            return Err(AbbaError::invalid("segment length must be at least 1"));
        }
        if k_mean < 2 || k_slope < 2 {
            return Err(AbbaError::invalid(format!(
                "need at least 2 mean and 2 slope regions, got {k_mean} and {k_slope}"
            )));
        }
        Ok(OneDSaxConfig {
            segment_len,
            k_mean,
            k_slope,
            slope_variance_scale: DEFAULT_SLOPE_VARIANCE_SCALE,
            representative: Representative::ProbabilityMidpoint,
        })
    }

    /// Total alphabet size `k_mean * k_slope`.
    pub fn alphabet_size(&self) -> usize {
        self.k_mean * self.k_slope
    }

    fn slope_sigma(&self) -> f64 {
        (self.slope_variance_scale / self.segment_len as f64).sqrt()
    }
}

/// Ordinary least-squares line over `x = 0..len`: returns `(mean, slope)`,
/// where `mean` is the line's value at the segment center.
pub fn fit_line(segment: &[f64]) -> (f64, f64) {
    let n = segment.len() as f64;
    let mean = segment.iter().sum::<f64>() / n;
    if segment.len() < 2 {
        return (mean, 0.0);
    }
    let x_bar = (n - 1.0) / 2.0;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in segment.iter().enumerate() {
        let dx = i as f64 - x_bar;
        sxy += dx * (y - mean);
        sxx += dx * dx;
    }
    (mean, sxy / sxx)
}

pub fn onedsax_symbolize(values: &[f64], config: &OneDSaxConfig) -> Result<String> {
    if values.len() < config.segment_len {
        return Err(AbbaError::invalid(format!(
            "series of length {} is shorter than the segment length {}",
            values.len(),
            config.segment_len
        )));
    }
    let mean_bp = gaussian_breakpoints(config.k_mean)?;
    let sigma = config.slope_sigma();
    let slope_bp: Vec<f64> = gaussian_breakpoints(config.k_slope)?
        .into_iter()
        .map(|b| b * sigma)
        .collect();
    Ok(values
        .chunks_exact(config.segment_len)
        .map(|seg| {
            let (mean, slope) = fit_line(seg);
            let m = region_of(mean, &mean_bp);
            let s = region_of(slope, &slope_bp);
            symbol_for(m * config.k_slope + s)
        })
        .collect())
}

/// Rebuilds each segment as the line through the representative mean with
/// the representative slope.
pub fn onedsax_reconstruct(symbols: &str, config: &OneDSaxConfig, original_length: usize) -> Result<Vec<f64>> {
    let w = config.segment_len;
    let n_segments = original_length / w;
    if symbols.chars().count() != n_segments {
        return Err(AbbaError::invalid(format!(
            "expected {n_segments} symbols for length {original_length}, got {}",
            symbols.chars().count()
        )));
    }
    let sigma = config.slope_sigma();
    let x_bar = (w as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(n_segments * w);
    for (position, symbol) in symbols.chars().enumerate() {
        let code = symbol_index(symbol)
            .filter(|&i| i < config.alphabet_size())
            .ok_or(AbbaError::UnknownSymbol { symbol, position })?;
        let mean = config.representative.value(code / config.k_slope, config.k_mean);
        let slope = if w > 1 {
            sigma * config.representative.value(code % config.k_slope, config.k_slope)
        } else {
            0.0
        };
        out.extend((0..w).map(|i| mean + slope * (i as f64 - x_bar)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_segment() {
        let (m, s) = fit_line(&[0.0, 1.0, 2.0, 3.0]);
        assert!((m - 1.5).abs() < 1e-15);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_v_has_zero_slope() {
        let (_, s) = fit_line(&[2.0, 1.0, 0.0, 1.0, 2.0]);
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn flat_centered_segments_use_center_symbol() {
        let cfg = OneDSaxConfig::new(5, 3, 3).unwrap();
        let v = [0.01, -0.02, 0.0, 0.02, -0.01, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(onedsax_symbolize(&v, &cfg).unwrap(), "ee");
        let r = onedsax_reconstruct("ee", &cfg, 10).unwrap();
        assert!(r.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn steep_rise_gets_top_slope_region() {
        let cfg = OneDSaxConfig::new(4, 3, 3).unwrap();
        let s = onedsax_symbolize(&[-1.0, -0.3, 0.3, 1.0], &cfg).unwrap();
        assert_eq!(s, "f");
        let r = onedsax_reconstruct(&s, &cfg, 4).unwrap();
        assert!(r.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(OneDSaxConfig::new(0, 3, 3).is_err());
        assert!(OneDSaxConfig::new(3, 1, 3).is_err());
        let cfg = OneDSaxConfig::new(3, 3, 3).unwrap();
        assert!(onedsax_symbolize(&[0.0], &cfg).is_err());
        assert!(onedsax_reconstruct("j", &cfg, 3).is_err());
    }
}
