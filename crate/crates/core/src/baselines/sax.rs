//! Symbolic aggregate approximation: fixed-width segment means quantized
//! against Gaussian breakpoints.

use super::normal::{gaussian_breakpoints, region_of, Representative};
use crate::digitization::{symbol_for, symbol_index};
use crate::error::{AbbaError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaxConfig {
    pub segment_len: usize,
    pub k: usize,
}

impl SaxConfig {
    pub fn new(segment_len: usize, k: usize) -> Result<Self> {
        if segment_len == 0 {
            return Err(AbbaError::invalid("segment length must be at least 1"));
        }
        if k < 2 {
            return Err(AbbaError::invalid(format!("alphabet size must be at least 2, got {k}")));
        }
        Ok(SaxConfig { segment_len, k })
    }
}

/// Means of consecutive `w`-wide segments over the first `⌊len/w⌋·w` samples.
pub fn paa(values: &[f64], w: usize) -> Vec<f64> {
    values
        .chunks_exact(w)
        .map(|c| c.iter().sum::<f64>() / w as f64)
        .collect()
}

pub fn sax_symbolize(values: &[f64], config: &SaxConfig) -> Result<String> {
    if values.len() < config.segment_len {
        return Err(AbbaError::invalid(format!(
            "series of length {} is shorter than the segment length {}",
            values.len(),
            config.segment_len
        )));
    }
    let breakpoints = gaussian_breakpoints(config.k)?;
    Ok(paa(values, config.segment_len)
        .into_iter()
        .map(|m| symbol_for(region_of(m, &breakpoints)))
        .collect())
}

/// Piecewise-constant reconstruction at the probability-midpoint
/// representative of each region. The output covers `⌊original_length/w⌋·w`
/// samples.
pub fn sax_reconstruct(symbols: &str, config: &SaxConfig, original_length: usize) -> Result<Vec<f64>> {
    let n_segments = original_length / config.segment_len;
    if symbols.chars().count() != n_segments {
        return Err(AbbaError::invalid(format!(
            "expected {n_segments} symbols for length {original_length}, got {}",
            symbols.chars().count()
        )));
    }
    let mut out = Vec::with_capacity(n_segments * config.segment_len);
    for (position, symbol) in symbols.chars().enumerate() {
        let region = symbol_index(symbol)
            .filter(|&i| i < config.k)
            .ok_or(AbbaError::UnknownSymbol { symbol, position })?;
        let level = Representative::ProbabilityMidpoint.value(region, config.k);
        out.extend(std::iter::repeat_n(level, config.segment_len));
    }
    Ok(out)
}
