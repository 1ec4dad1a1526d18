//! Adaptive Brownian bridge-based symbolic aggregation (ABBA) of time series.
//!
//! A series is first compressed into a polygonal chain of `(len, inc)` pieces
//! whose chord residuals stay within a tolerance. The pieces are then
//! clustered and each piece is replaced by the symbol of its cluster.
//! Reconstruction reverses both steps. The crate also ships the SAX and
//! 1d-SAX baselines, TARZAN-style anomaly scores over symbol strings and a
//! small harness for comparing reconstruction errors.
//!
//! ```
//! use abba::{compress, digitize, reconstruct, CompressionConfig, DigitizationConfig, TimeSeries};
//!
//! let ts = TimeSeries::new((0..200).map(|i| (i as f64 / 10.0).sin()).collect())?;
//! let pieces = compress(&ts, &CompressionConfig::new(0.1)?);
//! let symbolic = digitize(&pieces, &DigitizationConfig::default(), 0.1)?;
//! let approx = reconstruct(&symbolic)?;
//! assert_eq!(approx.len(), ts.len());
//! # Ok::<(), abba::AbbaError>(())
//! ```

pub mod baselines;
pub mod compression;
pub mod digitization;
pub mod distances;
mod error;
pub mod harness;
pub mod preprocessing;
pub mod reconstruction;
pub mod tarzan;

pub use compression::{
    compress, compression_error_bound, tolerance_for_pieces, CompressionConfig, Piece, PieceSequence,
};
pub use digitization::{digitize, digitize_with_tol_s, ClusterModel, DigitizationConfig, ModelSidecar, SymbolicSeries};
pub use distances::DistanceKind;
pub use error::{AbbaError, Result};
pub use preprocessing::{denormalize, normalize, normalize_with, Normalized, TimeSeries};
pub use reconstruction::{bridge_errors, inverse_compress, inverse_digitize, reconstruct};
