//! Digitization: clustering of the `(len, inc)` tuples into symbols.
//!
//! The number of clusters is the smallest `k` in `[min_k, max_k]` whose
//! maximal within-cluster variance satisfies
//! `max(scl * Var_len, Var_inc) <= tol_s^2`, where `tol_s` is derived from the
//! compression tolerance so that the digitization error is of the same order
//! as the compression error.

mod ckmeans;
mod lloyd;
mod sidecar;

use serde::{Deserialize, Serialize};

use crate::compression::{Piece, PieceSequence};
use crate::error::{AbbaError, Result};
use crate::preprocessing::population_std;

pub use sidecar::{parse_scl, ModelSidecar};

/// Default standard-deviation multiplier in the `tol_s` formula.
pub const DEFAULT_S: f64 = 0.2;
pub const DEFAULT_MAX_K: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DigitizationConfig {
    /// Weight of the length coordinate; 0 clusters increments only,
    /// `f64::INFINITY` clusters lengths only.
    pub scl: f64,
    pub s: f64,
    pub min_k: usize,
    pub max_k: usize,
    /// Seed for the 2-D clustering initialization.
    pub seed: u64,
}

impl Default for DigitizationConfig {
    fn default() -> Self {
        DigitizationConfig {
            scl: 0.0,
            s: DEFAULT_S,
            min_k: 1,
            max_k: DEFAULT_MAX_K,
            seed: 0,
        }
    }
}

impl DigitizationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scl.is_nan() || self.scl < 0.0 {
            return Err(AbbaError::invalid(format!("scl must be in [0, inf], got {}", self.scl)));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(AbbaError::invalid(format!("s must be positive, got {}", self.s)));
        }
        if self.min_k == 0 || self.min_k > self.max_k {
            return Err(AbbaError::invalid(format!(
                "need 1 <= min_k <= max_k, got min_k={} max_k={}",
                self.min_k, self.max_k
            )));
        }
        Ok(())
    }
}

/// `tol_s = (tol / s) * sqrt(6 (N - n) / (N n))`.
pub fn compute_tol_s(tol: f64, series_length: usize, n_pieces: usize, s: f64) -> Result<f64> {
    if n_pieces == 0 || n_pieces >= series_length {
        return Err(AbbaError::invalid(format!(
            "tol_s needs 0 < n < N, got n={n_pieces} N={series_length}"
        )));
    }
    if s.is_nan() || s <= 0.0 {
        return Err(AbbaError::invalid(format!("s must be positive, got {s}")));
    }
    let big_n = series_length as f64;
    let n = n_pieces as f64;
    Ok(tol / s * (6.0 * (big_n - n) / (big_n * n)).sqrt())
}

/// Normalization constants for the tuple coordinates. Population standard
/// deviations; swap this function to change the convention.
pub fn tuple_sigmas(pieces: &[Piece]) -> (f64, f64) {
    let lens: Vec<f64> = pieces.iter().map(|p| p.len as f64).collect();
    let incs: Vec<f64> = pieces.iter().map(|p| p.inc).collect();
    (population_std(&lens), population_std(&incs))
}

fn scaled(value: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        value / sigma
    } else {
        0.0
    }
}

/// Maps each tuple to `(scl * len / σ_len, inc / σ_inc)`.
///
/// A coordinate whose σ is zero maps to 0. With `scl = ∞` the length
/// coordinate keeps unit weight (only lengths are clustered in that case).
pub fn scale_tuples(pieces: &[Piece], scl: f64) -> Vec<[f64; 2]> {
    let (sigma_len, sigma_inc) = tuple_sigmas(pieces);
    let weight = if scl.is_infinite() { 1.0 } else { scl };
    pieces
        .iter()
        .map(|p| [weight * scaled(p.len as f64, sigma_len), scaled(p.inc, sigma_inc)])
        .collect()
}

/// Result of a 1-D clustering scan.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering1d {
    pub k: usize,
    /// Per-value cluster label; label 0 holds the smallest values.
    pub assignments: Vec<usize>,
    pub max_variance: f64,
    pub wcss: f64,
}

/// Per-cluster population variances of `values` under `labels`.
pub fn cluster_variances(values: &[f64], labels: &[usize], k: usize) -> Vec<f64> {
    let mut sum = vec![0.0; k];
    let mut count = vec![0usize; k];
    for (&v, &l) in values.iter().zip(labels) {
        sum[l] += v;
        count[l] += 1;
    }
    let means: Vec<f64> = sum
        .iter()
        .zip(&count)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect();
    let mut ss = vec![0.0; k];
    for (&v, &l) in values.iter().zip(labels) {
        ss[l] += (v - means[l]) * (v - means[l]);
    }
    ss.iter()
        .zip(&count)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect()
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// WCSS-optimal 1-D clustering with the smallest admissible `k`.
///
/// Scans `k` upward from `min_k` and returns the first optimal partition
/// whose largest cluster variance is at most `tol_s^2`, or the `max_k`
/// partition when none qualifies. `k` never exceeds the number of values.
pub fn cluster_1d(values: &[f64], tol_s: f64, min_k: usize, max_k: usize) -> Result<Clustering1d> {
    if min_k == 0 || min_k > max_k {
        return Err(AbbaError::invalid(format!(
            "need 1 <= min_k <= max_k, got min_k={min_k} max_k={max_k}"
        )));
    }
    let mut dp = ckmeans::SortedDp::new(values)?;
    let n = dp.len();
    let hi = max_k.min(n);
    let lo = min_k.min(hi);
    // Beyond the number of distinct values every partition has zero variance.
    let hi_useful = hi.min(dp.distinct_count().max(lo));
    let threshold = tol_s * tol_s;

    let mut result = None;
    for k in lo..=hi_useful {
        let labels = dp.partition(k);
        let vars = cluster_variances(values, &labels, k);
        let max_variance = max_of(&vars);
        let accepted = max_variance <= threshold;
        result = Some((k, labels, vars, max_variance));
        if accepted {
            break;
        }
    }
    let (k, assignments, vars, max_variance) = result.expect("k range is non-empty");
    let counts = counts(&assignments, k);
    let wcss = vars.iter().zip(&counts).map(|(v, &c)| v * c as f64).sum();
    Ok(Clustering1d {
        k,
        assignments,
        max_variance,
        wcss,
    })
}

/// Result of a 2-D clustering scan. Variances are on the unscaled tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering2d {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub var_len_max: f64,
    pub var_inc_max: f64,
}

/// Lloyd clustering of the scaled tuples, scanning `k` upward until
/// `max(scl * Var_len, Var_inc) <= tol_s^2` holds on the unscaled tuples.
pub fn cluster_2d(
    scaled: &[[f64; 2]],
    pieces: &[Piece],
    tol_s: f64,
    scl: f64,
    min_k: usize,
    max_k: usize,
    seed: u64,
) -> Result<Clustering2d> {
    if scaled.is_empty() {
        return Err(AbbaError::invalid("cannot cluster an empty set of tuples"));
    }
    if scaled.len() != pieces.len() {
        return Err(AbbaError::invalid("scaled and unscaled tuple counts differ"));
    }
    if min_k == 0 || min_k > max_k {
        return Err(AbbaError::invalid(format!(
            "need 1 <= min_k <= max_k, got min_k={min_k} max_k={max_k}"
        )));
    }
    let lens: Vec<f64> = pieces.iter().map(|p| p.len as f64).collect();
    let incs: Vec<f64> = pieces.iter().map(|p| p.inc).collect();
    let hi = max_k.min(lloyd::distinct_points(scaled));
    let lo = min_k.min(hi);
    let threshold = tol_s * tol_s;

    let mut result = None;
    for k in lo..=hi {
        let labels = lloyd::lloyd(scaled, k, seed);
        let var_len_max = max_of(&cluster_variances(&lens, &labels, k));
        let var_inc_max = max_of(&cluster_variances(&incs, &labels, k));
        let accepted = (scl * var_len_max).max(var_inc_max) <= threshold;
        result = Some(Clustering2d {
            k,
            assignments: labels,
            var_len_max,
            var_inc_max,
        });
        if accepted {
            break;
        }
    }
    Ok(result.expect("k range is non-empty"))
}

/// Unscaled mean of one cluster.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Center {
    pub len: f64,
    pub inc: f64,
}

/// Cluster centers and the statistics needed to reconstruct and audit a
/// digitization. Cluster `i` is the cluster of symbol `i` of the alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterModel {
    pub k: usize,
    pub centers: Vec<Center>,
    pub assignments: Vec<usize>,
    pub sigma_len: f64,
    pub sigma_inc: f64,
    pub var_len_max: f64,
    pub var_inc_max: f64,
    pub tol_s: f64,
    pub scl: f64,
}

impl ClusterModel {
    /// Number of tuples per cluster, in symbol order. A cluster that is much
    /// smaller than the rest marks a candidate trend anomaly.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        counts(&self.assignments, self.k)
    }
}

fn counts(labels: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    for &l in labels {
        c[l] += 1;
    }
    c
}

/// Symbol for cluster index `i`: `a..z`, then `A..Z`, then consecutive code
/// points from U+00C0.
pub fn symbol_for(i: usize) -> char {
    match i {
        0..=25 => (b'a' + i as u8) as char,
        26..=51 => (b'A' + (i - 26) as u8) as char,
        _ => char::from_u32(0xC0 + (i - 52) as u32).expect("alphabet index out of range"),
    }
}

/// Inverse of [`symbol_for`].
pub fn symbol_index(c: char) -> Option<usize> {
    match c {
        'a'..='z' => Some(c as usize - 'a' as usize),
        'A'..='Z' => Some(c as usize - 'A' as usize + 26),
        _ if (c as u32) >= 0xC0 => Some((c as u32 - 0xC0) as usize + 52),
        _ => None,
    }
}

/// A symbol string plus everything needed to turn it back into a series.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSeries {
    pub symbols: String,
    pub model: ClusterModel,
    pub start_value: f64,
    /// `N`, the number of time steps the symbols cover.
    pub original_length: usize,
}

impl SymbolicSeries {
    pub fn len(&self) -> usize {
        self.model.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.model.assignments.is_empty()
    }

    /// Cluster indices of the symbols, validated against the model.
    pub fn symbol_indices(&self) -> Result<Vec<usize>> {
        self.symbols
            .chars()
            .enumerate()
            .map(|(position, symbol)| match symbol_index(symbol) {
                Some(i) if i < self.model.k => Ok(i),
                _ => Err(AbbaError::UnknownSymbol { symbol, position }),
            })
            .collect()
    }
}

/// Relabels clusters so that label 0 is the most frequent, ties broken by
/// first occurrence in the tuple sequence.
fn frequency_order(labels: &[usize], k: usize) -> Vec<usize> {
    let count = counts(labels, k);
    let mut first = vec![usize::MAX; k];
    for (pos, &l) in labels.iter().enumerate() {
        if first[l] == usize::MAX {
            first[l] = pos;
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(count[c]), first[c]));
    let mut rank = vec![0; k];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    labels.iter().map(|&l| rank[l]).collect()
}

/// Digitizes a compressed series with `tol_s` derived from `tol`.
///
/// When every grid step is its own piece (`n == N`) the derived tolerance
/// degenerates to its limit 0.
pub fn digitize(pieces: &PieceSequence, config: &DigitizationConfig, tol: f64) -> Result<SymbolicSeries> {
    let n = pieces.len();
    if n == 0 {
        return Err(AbbaError::invalid("cannot digitize an empty piece sequence"));
    }
    let tol_s = if n >= pieces.original_length {
        0.0
    } else {
        compute_tol_s(tol, pieces.original_length, n, config.s)?
    };
    digitize_with_tol_s(pieces, config, tol_s)
}

/// Digitizes with an explicit variance tolerance `tol_s`.
pub fn digitize_with_tol_s(pieces: &PieceSequence, config: &DigitizationConfig, tol_s: f64) -> Result<SymbolicSeries> {
    config.validate()?;
    if pieces.is_empty() {
        return Err(AbbaError::invalid("cannot digitize an empty piece sequence"));
    }
    if tol_s.is_nan() || tol_s < 0.0 {
        return Err(AbbaError::invalid(format!("tol_s must be non-negative, got {tol_s}")));
    }
    let tuples = &pieces.pieces;
    let lens = pieces.lengths();
    let incs = pieces.increments();
    let (sigma_len, sigma_inc) = tuple_sigmas(tuples);

    let (k, raw_labels) = if config.scl == 0.0 {
        let c = cluster_1d(&incs, tol_s, config.min_k, config.max_k)?;
        (c.k, c.assignments)
    } else if config.scl.is_infinite() {
        let c = cluster_1d(&lens, tol_s, config.min_k, config.max_k)?;
        (c.k, c.assignments)
    } else {
        let scaled = scale_tuples(tuples, config.scl);
        let c = cluster_2d(
            &scaled,
            tuples,
            tol_s,
            config.scl,
            config.min_k,
            config.max_k,
            config.seed,
        )?;
        (c.k, c.assignments)
    };

    let assignments = frequency_order(&raw_labels, k);
    let sizes = counts(&assignments, k);
    let mut sums = vec![(0.0, 0.0); k];
    for (p, &l) in tuples.iter().zip(&assignments) {
        sums[l].0 += p.len as f64;
        sums[l].1 += p.inc;
    }
    let centers = sums
        .iter()
        .zip(&sizes)
        .map(|(&(sl, si), &c)| Center {
            len: sl / c as f64,
            inc: si / c as f64,
        })
        .collect();
    let var_len_max = max_of(&cluster_variances(&lens, &assignments, k));
    let var_inc_max = max_of(&cluster_variances(&incs, &assignments, k));
    let symbols = assignments.iter().map(|&l| symbol_for(l)).collect();

    Ok(SymbolicSeries {
        symbols,
        model: ClusterModel {
            k,
            centers,
            assignments,
            sigma_len,
            sigma_inc,
            var_len_max,
            var_inc_max,
            tol_s,
            scl: config.scl,
        },
        start_value: pieces.start_value,
        original_length: pieces.original_length,
    })
}
