//! Desk-scale comparison of ABBA against SAX and 1d-SAX.
//!
//! Each series is z-normalized and compressed at the first tolerance of the
//! schedule that reaches the target compression rate. The resulting piece
//! count `n` fixes the SAX/1d-SAX segment width `w = ⌊(N+1)/n⌋`, so all three
//! methods emit `n` symbols from a `k = 9` alphabet. Reconstruction errors are
//! recorded under every distance measure and summarized by performance
//! profiles.

mod corpus;
mod ingest;
mod profile;

use std::fmt;

use rayon::prelude::*;

use crate::baselines::{
    onedsax_reconstruct, onedsax_symbolize, sax_reconstruct, sax_symbolize, OneDSaxConfig, SaxConfig,
};
use crate::compression::{compress, CompressionConfig, PieceSequence};
use crate::digitization::{digitize, DigitizationConfig, DEFAULT_S};
use crate::distances::DistanceKind;
use crate::error::{AbbaError, Result};
use crate::preprocessing::{normalize, TimeSeries};
use crate::reconstruction::reconstruct;

pub use corpus::{bundled_mini_corpus, mini_corpus, MINI_CORPUS_SEED, MINI_CORPUS_SIZE, MINI_CORPUS_TSV};
pub use ingest::{ingest, parse_csv, parse_ucr, write_csv, write_ucr, InputFormat, LabeledSeries};
pub use profile::{performance_profile, performance_ratios, profile_csv, ProfileCurve};

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub tol_schedule: Vec<f64>,
    /// Accept a tolerance once `n <= compression_target * N`.
    pub compression_target: f64,
    pub min_series_len: usize,
    pub min_pieces: usize,
    /// Alphabet size for all three methods (1d-SAX splits it 3 x 3).
    pub k: usize,
    pub scl: f64,
    pub s: f64,
    pub max_len: Option<usize>,
    pub distances: Vec<DistanceKind>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            tol_schedule: (1..=10).map(|i| i as f64 / 20.0).collect(),
            compression_target: 0.2,
            min_series_len: 100,
            min_pieces: 9,
            k: 9,
            scl: 0.0,
            s: DEFAULT_S,
            max_len: None,
            distances: DistanceKind::ALL.to_vec(),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExclusionReason {
    TooShort,
    TooNoisy,
    TooFewPieces,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::TooShort => "too_short",
            ExclusionReason::TooNoisy => "too_noisy",
            ExclusionReason::TooFewPieces => "too_few_pieces",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ToleranceSelection {
    Accepted { tol: f64, pieces: PieceSequence },
    Excluded(ExclusionReason),
}

/// Walks the tolerance schedule until the compression target is met.
pub fn select_tolerance(series: &TimeSeries, config: &ExperimentConfig) -> Result<ToleranceSelection> {
    if series.len() < config.min_series_len {
        return Ok(ToleranceSelection::Excluded(ExclusionReason::TooShort));
    }
    let big_n = series.last_index() as f64;
    for &tol in &config.tol_schedule {
        let mut cc = CompressionConfig::new(tol)?;
        if let Some(m) = config.max_len {
            cc = cc.with_max_len(m)?;
        }
        let pieces = compress(series, &cc);
        if pieces.len() as f64 <= config.compression_target * big_n {
            if pieces.len() < config.min_pieces {
                return Ok(ToleranceSelection::Excluded(ExclusionReason::TooFewPieces));
            }
            return Ok(ToleranceSelection::Accepted { tol, pieces });
        }
    }
    Ok(ToleranceSelection::Excluded(ExclusionReason::TooNoisy))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Abba,
    Sax,
    OneDSax,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Abba, Algorithm::Sax, Algorithm::OneDSax];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Abba => "ABBA",
            Algorithm::Sax => "SAX",
            Algorithm::OneDSax => "1dSAX",
        }
    }
}

/// Reconstructions of one series by all three methods.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstructions {
    pub tol: f64,
    pub n: usize,
    /// The normalized series.
    pub original: Vec<f64>,
    pub abba: Vec<f64>,
    /// SAX and 1d-SAX cover only the first `n * w` samples.
    pub sax: Vec<f64>,
    pub onedsax: Vec<f64>,
}

impl Reconstructions {
    pub fn truncated_original(&self) -> &[f64] {
        &self.original[..self.sax.len()]
    }

    pub fn errors(&self, kind: DistanceKind) -> Result<[f64; 3]> {
        let truncated = self.truncated_original();
        Ok([
            kind.measure(&self.original, &self.abba)?,
            kind.measure(truncated, &self.sax)?,
            kind.measure(truncated, &self.onedsax)?,
        ])
    }
}

pub enum SeriesOutcome {
    Included(Reconstructions),
    Excluded(ExclusionReason),
}

/// Runs the full protocol on one raw series.
pub fn reconstruct_all(series: &TimeSeries, config: &ExperimentConfig) -> Result<SeriesOutcome> {
    if series.len() < config.min_series_len {
        return Ok(SeriesOutcome::Excluded(ExclusionReason::TooShort));
    }
    let normalized = normalize(series).series;
    let (tol, pieces) = match select_tolerance(&normalized, config)? {
        ToleranceSelection::Accepted { tol, pieces } => (tol, pieces),
        ToleranceSelection::Excluded(reason) => return Ok(SeriesOutcome::Excluded(reason)),
    };
    let n = pieces.len();
    let dc = DigitizationConfig {
        scl: config.scl,
        s: config.s,
        min_k: 1,
        max_k: config.k,
        seed: config.seed,
    };
    let symbolic = digitize(&pieces, &dc, tol)?;
    let abba = reconstruct(&symbolic)?.into_values();

    let w = normalized.len() / n;
    let truncated = &normalized.values()[..n * w];
    let sax_cfg = SaxConfig::new(w, config.k)?;
    let sax = sax_reconstruct(&sax_symbolize(truncated, &sax_cfg)?, &sax_cfg, truncated.len())?;
    let (k_mean, k_slope) = split_alphabet(config.k);
    let od_cfg = OneDSaxConfig::new(w, k_mean, k_slope)?;
    let onedsax = onedsax_reconstruct(&onedsax_symbolize(truncated, &od_cfg)?, &od_cfg, truncated.len())?;

    Ok(SeriesOutcome::Included(Reconstructions {
        tol,
        n,
        original: normalized.into_values(),
        abba,
        sax,
        onedsax,
    }))
}

/// Splits an alphabet of size `k` into mean and slope levels, as square as
/// possible (9 becomes 3 x 3).
fn split_alphabet(k: usize) -> (usize, usize) {
    (2..=k)
        .filter(|a| k.is_multiple_of(*a) && a * a >= k && k / a >= 2)
        .map(|a| (a, k / a))
        .next()
        .unwrap_or((k, 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRow {
    pub id: String,
    pub tol: f64,
    pub n: usize,
    /// `N`, the last grid index.
    pub length: usize,
    /// One `[ABBA, SAX, 1dSAX]` triple per distance of the matrix.
    pub errors: Vec<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorMatrix {
    pub distances: Vec<DistanceKind>,
    pub rows: Vec<ErrorRow>,
    pub excluded: Vec<(String, ExclusionReason)>,
    pub failures: Vec<(String, String)>,
}

impl ErrorMatrix {
    pub fn algorithm_names() -> Vec<String> {
        Algorithm::ALL.iter().map(|a| a.name().to_string()).collect()
    }

    /// The `rows x 3` error table of one distance.
    pub fn table(&self, kind: DistanceKind) -> Result<Vec<Vec<f64>>> {
        let col = self
            .distances
            .iter()
            .position(|&d| d == kind)
            .ok_or_else(|| AbbaError::invalid(format!("distance {kind} not in the matrix")))?;
        Ok(self.rows.iter().map(|r| r.errors[col].to_vec()).collect())
    }

    pub fn profile(&self, kind: DistanceKind) -> Result<Vec<ProfileCurve>> {
        performance_profile(&self.table(kind)?, &Self::algorithm_names())
    }

    /// Long-format CSV: `series,tol,n,N,distance,ABBA,SAX,1dSAX`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["series", "tol", "n", "N", "distance", "ABBA", "SAX", "1dSAX"])
            .map_err(csv_error)?;
        for row in &self.rows {
            for (kind, e) in self.distances.iter().zip(&row.errors) {
                w.write_record([
                    row.id.clone(),
                    row.tol.to_string(),
                    row.n.to_string(),
                    row.length.to_string(),
                    kind.name().to_string(),
                    e[0].to_string(),
                    e[1].to_string(),
                    e[2].to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| AbbaError::invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| AbbaError::invalid(e.to_string()))
    }

    /// Reads the CSV written by [`ErrorMatrix::to_csv`].
    pub fn from_csv(text: &str) -> Result<ErrorMatrix> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut distances: Vec<DistanceKind> = Vec::new();
        let mut rows: Vec<ErrorRow> = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(csv_error)?;
            let parse_err = |message: String| AbbaError::Parse {
                source_name: "error matrix".into(),
                line,
                message,
            };
            if record.len() != 8 {
                return Err(parse_err(format!("expected 8 fields, found {}", record.len())));
            }
            let num = |j: usize| -> Result<f64> {
                record[j]
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("bad number {:?}", &record[j])))
            };
            let int = |j: usize| -> Result<usize> {
                record[j]
                    .parse::<usize>()
                    .map_err(|_| parse_err(format!("bad integer {:?}", &record[j])))
            };
            let kind: DistanceKind = record[4].parse().map_err(|e: AbbaError| parse_err(e.to_string()))?;
            if !distances.contains(&kind) {
                distances.push(kind);
            }
            let id = record[0].to_string();
            let errors = [num(5)?, num(6)?, num(7)?];
            let row = match rows.last_mut() {
                Some(r) if r.id == id => r,
                _ => {
                    rows.push(ErrorRow {
                        id,
                        tol: num(1)?,
                        n: int(2)?,
                        length: int(3)?,
                        errors: Vec::new(),
                    });
                    rows.last_mut().expect("just pushed")
                }
            };
            let col = distances.iter().position(|&d| d == kind).expect("registered");
            if row.errors.len() != col {
                return Err(parse_err(format!("distance {kind} out of order")));
            }
            row.errors.push(errors);
        }
        if rows.iter().any(|r| r.errors.len() != distances.len()) {
            return Err(AbbaError::invalid("error matrix has missing entries"));
        }
        Ok(ErrorMatrix {
            distances,
            rows,
            excluded: Vec::new(),
            failures: Vec::new(),
        })
    }
}

fn csv_error(e: csv::Error) -> AbbaError {
    AbbaError::invalid(format!("csv: {e}"))
}

/// Runs the comparison over a corpus. Series are processed in parallel; the
/// rows keep input order. Failures are recorded, never fatal.
pub fn run_comparison(corpus: &[LabeledSeries], config: &ExperimentConfig) -> Result<ErrorMatrix> {
    if corpus.is_empty() {
        return Err(AbbaError::invalid("empty corpus"));
    }
    if config.distances.is_empty() {
        return Err(AbbaError::invalid("no distance measures selected"));
    }
    let outcomes: Vec<std::result::Result<ErrorRow, ExclusionOrFailure>> = corpus
        .par_iter()
        .map(|item| {
            let fail = |e: AbbaError| ExclusionOrFailure::Failed(e.to_string());
            match reconstruct_all(&item.series, config).map_err(fail)? {
                SeriesOutcome::Excluded(r) => Err(ExclusionOrFailure::Excluded(r)),
                SeriesOutcome::Included(rec) => {
                    let errors = config
                        .distances
                        .iter()
                        .map(|&k| rec.errors(k))
                        .collect::<Result<Vec<_>>>()
                        .map_err(fail)?;
                    Ok(ErrorRow {
                        id: item.id.clone(),
                        tol: rec.tol,
                        n: rec.n,
                        length: item.series.last_index(),
                        errors,
                    })
                }
            }
        })
        .collect();

    let mut matrix = ErrorMatrix {
        distances: config.distances.clone(),
        rows: Vec::new(),
        excluded: Vec::new(),
        failures: Vec::new(),
    };
    for (item, outcome) in corpus.iter().zip(outcomes) {
        match outcome {
            Ok(row) => matrix.rows.push(row),
            Err(ExclusionOrFailure::Excluded(r)) => matrix.excluded.push((item.id.clone(), r)),
            Err(ExclusionOrFailure::Failed(msg)) => matrix.failures.push((item.id.clone(), msg)),
        }
    }
    Ok(matrix)
}

enum ExclusionOrFailure {
    Excluded(ExclusionReason),
    Failed(String),
}
