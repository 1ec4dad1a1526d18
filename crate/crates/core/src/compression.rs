//! Greedy adaptive piecewise-linear continuous approximation.
//!
//! Starting at `i_0 = 0`, each piece is extended one sample at a time for as
//! long as the squared deviation of the interior samples from the chord stays
//! within `(len - 1) * tol^2`. The result is a chain of `(len, inc)` tuples
//! that, together with `t_0`, reproduces the polygonal chain exactly.

use serde::{Deserialize, Serialize};

use crate::error::{AbbaError, Result};
use crate::preprocessing::TimeSeries;

/// One linear piece: its extent in time steps and its change in value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub len: usize,
    pub inc: f64,
}

/// The compressed form of a series: start value plus the tuple chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceSequence {
    pub start_value: f64,
    pub pieces: Vec<Piece>,
    /// `N`, the last grid index of the source series (`Σ len == N`).
    pub original_length: usize,
}

impl PieceSequence {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.len as f64).collect()
    }

    pub fn increments(&self) -> Vec<f64> {
        self.pieces.iter().map(|p| p.inc).collect()
    }

    /// Concatenates several chains into one tuple list (used to fit a shared
    /// alphabet over more than one series). Start values are taken from `self`.
    pub fn concat(parts: &[&PieceSequence]) -> PieceSequence {
        let start_value = parts.first().map_or(0.0, |p| p.start_value);
        let pieces: Vec<Piece> = parts.iter().flat_map(|p| p.pieces.iter().copied()).collect();
        let original_length = pieces.iter().map(|p| p.len).sum();
        PieceSequence {
            start_value,
            pieces,
            original_length,
        }
    }

    /// The pointwise polygonal chain through the breakpoints (`N + 1` samples).
    pub fn polygonal_chain(&self) -> Vec<f64> {
        stitch(
            self.start_value,
            self.pieces.iter().map(|p| (p.len, p.inc)),
            self.original_length,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompressionConfig {
    tol: f64,
    max_len: Option<usize>,
}

impl CompressionConfig {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(AbbaError::invalid(format!(
                "tolerance must be positive and finite, got {tol}"
            )));
        }
        Ok(CompressionConfig { tol, max_len: None })
    }

    pub fn with_max_len(mut self, max_len: usize) -> Result<Self> {
        if max_len == 0 {
            return Err(AbbaError::invalid("max_len must be at least 1"));
        }
        self.max_len = Some(max_len);
        Ok(self)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_len(&self) -> Option<usize> {
        self.max_len
    }
}

/// Squared deviation of `values[start..=end]` from the chord joining the two
/// endpoints, evaluated term by term.
pub(crate) fn chord_residual(values: &[f64], start: usize, end: usize) -> f64 {
    let len = (end - start) as f64;
    let t0 = values[start];
    let inc = values[end] - t0;
    (start + 1..end)
        .map(|i| {
            let line = t0 + inc * (i - start) as f64 / len;
            (line - values[i]) * (line - values[i])
        })
        .sum()
}

/// Compresses a series into a `(len, inc)` chain.
///
/// The caller is expected to have normalized the series. Each emitted piece
/// satisfies the chord bound and is maximal: adding one more sample would
/// break the bound, hit `max_len`, or run past the end of the series.
pub fn compress(series: &TimeSeries, config: &CompressionConfig) -> PieceSequence {
    let t = series.values();
    let last = series.last_index();
    let tol2 = config.tol * config.tol;
    let mut pieces = Vec::new();
    let mut start = 0;

    while start < last {
        let origin = t[start];
        // Running sums over x = i - start and u = t[i] - t[start].
        let mut sum_xu = 0.0;
        let mut sum_uu = 0.0;
        let mut end = start + 1;
        {
            let u = t[end] - origin;
            sum_xu += u;
            sum_uu += u * u;
        }
        loop {
            let cand = end + 1;
            if cand > last {
                break;
            }
            let len = cand - start;
            if config.max_len.is_some_and(|m| len > m) {
                break;
            }
            let x = len as f64;
            let u = t[cand] - origin;
            let next_xu = sum_xu + x * u;
            let next_uu = sum_uu + u * u;
            let sum_xx = x * (x + 1.0) * (2.0 * x + 1.0) / 6.0;
            let slope = u / x;
            let quad = slope * slope * sum_xx;
            let err = quad - 2.0 * slope * next_xu + next_uu;
            let bound = (len - 1) as f64 * tol2;
            // The expanded form cancels badly when err is tiny relative to the
            // sums; settle close calls with the exact term-by-term residual.
            let slack = 1e-9 * (quad + next_uu + bound);
            let fits = if (err - bound).abs() <= slack {
                chord_residual(t, start, cand) <= bound
            } else {
                err <= bound
            };
            if !fits {
                break;
            }
            end = cand;
            sum_xu = next_xu;
            sum_uu = next_uu;
        }
        pieces.push(Piece {
            len: end - start,
            inc: t[end] - origin,
        });
        start = end;
    }

    PieceSequence {
        start_value: t[0],
        pieces,
        original_length: last,
    }
}

/// Finds, by bisection over `(0, tol_max]`, a small tolerance whose chain has
/// at most `target` pieces. The piece count is not strictly monotone in the
/// tolerance, so the result is the smallest bracketed value that satisfies
/// the target, not necessarily the global minimum.
pub fn tolerance_for_pieces(series: &TimeSeries, target: usize, tol_max: f64, max_len: Option<usize>) -> Result<f64> {
    if target == 0 {
        return Err(AbbaError::invalid("target piece count must be at least 1"));
    }
    let pieces_at = |tol: f64| -> Result<usize> {
        let mut cfg = CompressionConfig::new(tol)?;
        if let Some(m) = max_len {
            cfg = cfg.with_max_len(m)?;
        }
        Ok(compress(series, &cfg).len())
    };
    if pieces_at(tol_max)? > target {
        return Err(AbbaError::invalid(format!(
            "even tol={tol_max} leaves more than {target} pieces"
        )));
    }
    let (mut lo, mut hi) = (0.0, tol_max);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pieces_at(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Guaranteed Euclidean distance between a series and its polygonal chain:
/// `sqrt((N - n) * tol^2)`.
pub fn compression_error_bound(series_length: usize, n_pieces: usize, tol: f64) -> Result<f64> {
    if n_pieces == 0 || n_pieces > series_length {
        return Err(AbbaError::invalid(format!(
            "piece count {n_pieces} must lie in 1..={series_length}"
        )));
    }
    Ok(((series_length - n_pieces) as f64).sqrt() * tol)
}

/// Breakpoints `(i_j, t_{i_j})` of the chain, `j = 0..=n`.
pub fn chain_points(pieces: &PieceSequence) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(pieces.len() + 1);
    let mut index = 0;
    let mut value = pieces.start_value;
    out.push((index, value));
    for p in &pieces.pieces {
        index += p.len;
        value += p.inc;
        out.push((index, value));
    }
    out
}

/// Linear interpolation of consecutive `(len, inc)` pieces onto the integer
/// grid. Produces `total_len + 1` samples.
pub(crate) fn stitch(start: f64, pieces: impl IntoIterator<Item = (usize, f64)>, total_len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(total_len + 1);
    out.push(start);
    let mut level = start;
    for (len, inc) in pieces {
        let step = len as f64;
        for x in 1..len {
            out.push(level + inc * x as f64 / step);
        }
        level += inc;
        out.push(level);
    }
    out
}
