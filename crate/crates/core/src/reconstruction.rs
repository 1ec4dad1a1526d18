//! Inverse digitization, length quantization and stitching.

use crate::compression::{stitch, PieceSequence};
use crate::digitization::SymbolicSeries;
use crate::error::{AbbaError, Result};
use crate::preprocessing::TimeSeries;

/// Pieces with integer lengths, ready to be stitched.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantizedPieces {
    pub start_value: f64,
    pub pieces: Vec<(usize, f64)>,
}

impl QuantizedPieces {
    pub fn total_len(&self) -> usize {
        self.pieces.iter().map(|p| p.0).sum()
    }
}

/// Replaces every symbol by the unscaled center of its cluster.
pub fn inverse_digitize(symbolic: &SymbolicSeries) -> Result<Vec<(f64, f64)>> {
    let centers = &symbolic.model.centers;
    symbolic
        .symbols
        .chars()
        .enumerate()
        .map(|(position, symbol)| {
            crate::digitization::symbol_index(symbol)
                .and_then(|i| centers.get(i))
                .map(|c| (c.len, c.inc))
                .ok_or(AbbaError::UnknownSymbol { symbol, position })
        })
        .collect()
}

/// Rounding used by the carry quantization: half away from zero.
fn round_length(x: f64) -> i64 {
    x.round() as i64
}

/// Carry rounding of real-valued piece lengths onto the integer grid.
///
/// Each length is rounded after adding the previous rounding error. A piece
/// that would round below 1 is clamped to 1 and the surplus travels on in the
/// carry. Whatever surplus is left when the pieces run out is taken from the
/// tail: pieces are shortened, and a piece that would drop to zero length is
/// removed with its increment merged into its predecessor. The output
/// therefore sums to `total` and may hold fewer pieces than the input.
pub fn quantize(pieces: &[(f64, f64)], start_value: f64, total: usize) -> QuantizedPieces {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(pieces.len());
    let mut carry = 0.0;
    for &(len, inc) in pieces {
        let target = len + carry;
        let rounded = round_length(target).max(1);
        carry = target - rounded as f64;
        out.push((rounded as usize, inc));
    }

    let mut sum: usize = out.iter().map(|p| p.0).sum();
    while sum > total && !out.is_empty() {
        let excess = sum - total;
        let last = out.len() - 1;
        if out[last].0 > excess {
            out[last].0 -= excess;
            sum = total;
        } else if last == 0 {
            break;
        } else {
            let (len, inc) = out.pop().expect("non-empty");
            out[last - 1].1 += inc;
            sum -= len;
        }
    }
    if sum < total {
        if let Some(tail) = out.last_mut() {
            tail.0 += total - sum;
        }
    }
    QuantizedPieces {
        start_value,
        pieces: out,
    }
}

/// Carry rounding of lengths alone; see [`quantize`].
pub fn quantize_lengths(lengths: &[f64]) -> Vec<usize> {
    let total = lengths.iter().sum::<f64>().round().max(0.0) as usize;
    let pieces: Vec<(f64, f64)> = lengths.iter().map(|&l| (l, 0.0)).collect();
    quantize(&pieces, 0.0, total).pieces.into_iter().map(|p| p.0).collect()
}

/// Stitches quantized pieces into a pointwise series of `Σ len + 1` samples.
pub fn inverse_compress(quantized: &QuantizedPieces) -> Result<TimeSeries> {
    TimeSeries::new(stitch(
        quantized.start_value,
        quantized.pieces.iter().copied(),
        quantized.total_len(),
    ))
}

/// The quantized pieces of a symbolic series.
pub fn quantized_pieces(symbolic: &SymbolicSeries) -> Result<QuantizedPieces> {
    let centers = inverse_digitize(symbolic)?;
    Ok(quantize(&centers, symbolic.start_value, symbolic.original_length))
}

/// Full reconstruction: inverse digitization, quantization, stitching.
pub fn reconstruct(symbolic: &SymbolicSeries) -> Result<TimeSeries> {
    inverse_compress(&quantized_pieces(symbolic)?)
}

/// Accumulated increment errors at the breakpoints,
/// `e_j = Σ_{l<=j} (center_inc(s_l) - inc_l)` for `j = 0..=n`.
///
/// `e_0` is exactly 0; `e_n` vanishes up to rounding because cluster centers
/// are plain means of their members.
pub fn bridge_errors(original: &PieceSequence, symbolic: &SymbolicSeries) -> Result<Vec<f64>> {
    let centers = inverse_digitize(symbolic)?;
    if centers.len() != original.len() {
        return Err(AbbaError::invalid(format!(
            "symbol string has {} symbols but the chain has {} pieces",
            centers.len(),
            original.len()
        )));
    }
    let mut out = Vec::with_capacity(centers.len() + 1);
    let mut acc = 0.0;
    out.push(acc);
    for ((_, center_inc), piece) in centers.iter().zip(&original.pieces) {
        acc += center_inc - piece.inc;
        out.push(acc);
    }
    Ok(out)
}
