//! Python bindings for the `abba` crate, importable as `pyabba`.
//!
//! Series cross the boundary as Python sequences of floats and come back as
//! lists. Library errors surface as `pyabba.AbbaError`, a `ValueError`.

use abba::baselines::{
    onedsax_reconstruct, onedsax_symbolize, sax_reconstruct, sax_symbolize, OneDSaxConfig, SaxConfig,
};
use abba::digitization::{parse_scl, DEFAULT_MAX_K, DEFAULT_S};
use abba::preprocessing::denormalize;
use abba::{
    compress as core_compress, compression_error_bound, digitize as core_digitize, normalize as core_normalize,
    reconstruct as core_reconstruct, tarzan, CompressionConfig, DigitizationConfig, DistanceKind, ModelSidecar, Piece,
    PieceSequence, SymbolicSeries, TimeSeries,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    pyabba,
    AbbaError,
    PyValueError,
    "Raised for invalid input to the abba routines."
);

fn to_py(e: abba::AbbaError) -> PyErr {
    AbbaError::new_err(e.to_string())
}

fn series(values: Vec<f64>) -> PyResult<TimeSeries> {
    TimeSeries::new(values).map_err(to_py)
}

/// A compressed series: start value plus `(len, inc)` pieces.
#[pyclass(name = "Pieces", module = "pyabba", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPieces {
    inner: PieceSequence,
}

#[pymethods]
impl PyPieces {
    #[new]
    #[pyo3(signature = (start_value, pieces))]
    fn new(start_value: f64, pieces: Vec<(usize, f64)>) -> PyResult<Self> {
        if pieces.iter().any(|&(len, _)| len == 0) {
            return Err(AbbaError::new_err("piece lengths must be at least 1"));
        }
        let pieces: Vec<Piece> = pieces.into_iter().map(|(len, inc)| Piece { len, inc }).collect();
        let original_length = pieces.iter().map(|p| p.len).sum();
        Ok(PyPieces {
            inner: PieceSequence {
                start_value,
                pieces,
                original_length,
            },
        })
    }

    #[getter]
    fn start_value(&self) -> f64 {
        self.inner.start_value
    }

    /// `N`, the number of time steps covered.
    #[getter]
    fn original_length(&self) -> usize {
        self.inner.original_length
    }

    #[getter]
    fn lengths(&self) -> Vec<usize> {
        self.inner.pieces.iter().map(|p| p.len).collect()
    }

    #[getter]
    fn increments(&self) -> Vec<f64> {
        self.inner.increments()
    }

    /// `(len, inc)` tuples.
    fn tuples(&self) -> Vec<(usize, f64)> {
        self.inner.pieces.iter().map(|p| (p.len, p.inc)).collect()
    }

    /// The polygonal chain through the breakpoints, `N + 1` samples.
    fn polygonal_chain(&self) -> Vec<f64> {
        self.inner.polygonal_chain()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Pieces(n={}, N={})", self.inner.len(), self.inner.original_length)
    }
}

/// A symbol string with the cluster model needed to decode it.
#[pyclass(name = "SymbolicSeries", module = "pyabba", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySymbolicSeries {
    inner: SymbolicSeries,
    mean: Option<f64>,
    std: Option<f64>,
}

#[pymethods]
impl PySymbolicSeries {
    #[getter]
    fn symbols(&self) -> &str {
        &self.inner.symbols
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.model.k
    }

    /// Unscaled `(len, inc)` center of each symbol, in alphabet order.
    #[getter]
    fn centers(&self) -> Vec<(f64, f64)> {
        self.inner.model.centers.iter().map(|c| (c.len, c.inc)).collect()
    }

    /// Cluster index of every piece.
    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.inner.model.assignments.clone()
    }

    #[getter]
    fn tol_s(&self) -> f64 {
        self.inner.model.tol_s
    }

    #[getter]
    fn scl(&self) -> f64 {
        self.inner.model.scl
    }

    #[getter]
    fn start_value(&self) -> f64 {
        self.inner.start_value
    }

    #[getter]
    fn original_length(&self) -> usize {
        self.inner.original_length
    }

    /// Mean and standard deviation removed before compression, if any.
    #[getter]
    fn normalization(&self) -> Option<(f64, f64)> {
        self.mean.zip(self.std)
    }

    /// Number of pieces of each symbol.
    fn cluster_sizes(&self) -> Vec<usize> {
        self.inner.model.cluster_sizes()
    }

    /// Decodes the symbols. With `denormalize=True` (the default) a series
    /// built by `symbolize` is returned in its original units.
    #[pyo3(signature = (denormalize = true))]
    fn reconstruct(&self, denormalize: bool) -> PyResult<Vec<f64>> {
        let rec = core_reconstruct(&self.inner).map_err(to_py)?;
        Ok(match (denormalize, self.mean, self.std) {
            (true, Some(m), Some(s)) => abba::preprocessing::denormalize(rec.values(), m, s),
            _ => rec.into_values(),
        })
    }

    /// The same model applied to a different symbol string.
    fn with_symbols(&self, symbols: &str) -> PyResult<Self> {
        let mut sidecar = self.sidecar();
        sidecar.symbols = symbols.to_string();
        Self::from_sidecar(&sidecar)
    }

    /// The JSON model sidecar, as written by the `abba` command-line tool.
    fn to_json(&self) -> PyResult<String> {
        self.sidecar().to_json().map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::from_sidecar(&ModelSidecar::from_json(text).map_err(to_py)?)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> &str {
        &self.inner.symbols
    }

    fn __repr__(&self) -> String {
        format!(
            "SymbolicSeries(k={}, symbols={:?})",
            self.inner.model.k, self.inner.symbols
        )
    }
}

impl PySymbolicSeries {
    fn sidecar(&self) -> ModelSidecar {
        let mut s = self.inner.to_sidecar();
        s.mean = self.mean;
        s.std = self.std;
        s
    }

    fn from_sidecar(sidecar: &ModelSidecar) -> PyResult<Self> {
        Ok(PySymbolicSeries {
            inner: SymbolicSeries::from_sidecar(sidecar).map_err(to_py)?,
            mean: sidecar.mean,
            std: sidecar.std,
        })
    }
}

fn compression_config(tol: f64, max_len: Option<usize>) -> PyResult<CompressionConfig> {
    let mut cfg = CompressionConfig::new(tol).map_err(to_py)?;
    if let Some(m) = max_len {
        cfg = cfg.with_max_len(m).map_err(to_py)?;
    }
    Ok(cfg)
}

fn digitization_config(scl: &Bound<'_, PyAny>, s: f64, max_k: usize, seed: u64) -> PyResult<DigitizationConfig> {
    let scl = match scl.extract::<f64>() {
        Ok(v) => v,
        Err(_) => parse_scl(&scl.extract::<String>()?).map_err(AbbaError::new_err)?,
    };
    let cfg = DigitizationConfig {
        scl,
        s,
        min_k: 1,
        max_k,
        seed,
    };
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

/// Compresses a series into linear pieces at tolerance `tol`.
#[pyfunction]
#[pyo3(signature = (values, tol, max_len = None))]
fn compress(values: Vec<f64>, tol: f64, max_len: Option<usize>) -> PyResult<PyPieces> {
    let cfg = compression_config(tol, max_len)?;
    Ok(PyPieces {
        inner: core_compress(&series(values)?, &cfg),
    })
}

/// Clusters the pieces into symbols. `scl` may be a number or `"inf"`.
#[pyfunction]
#[pyo3(signature = (pieces, tol, scl = None, s = DEFAULT_S, max_k = DEFAULT_MAX_K, seed = 0))]
fn digitize(
    py: Python<'_>,
    pieces: &PyPieces,
    tol: f64,
    scl: Option<&Bound<'_, PyAny>>,
    s: f64,
    max_k: usize,
    seed: u64,
) -> PyResult<PySymbolicSeries> {
    let zero = 0.0f64.into_pyobject(py)?.into_any();
    let cfg = digitization_config(scl.unwrap_or(&zero), s, max_k, seed)?;
    Ok(PySymbolicSeries {
        inner: core_digitize(&pieces.inner, &cfg, tol).map_err(to_py)?,
        mean: None,
        std: None,
    })
}

/// Z-normalizes, compresses and digitizes in one step.
#[pyfunction]
#[pyo3(signature = (values, tol, scl = None, s = DEFAULT_S, max_k = DEFAULT_MAX_K, max_len = None, seed = 0, normalize = true))]
#[allow(clippy::too_many_arguments)]
fn symbolize(
    py: Python<'_>,
    values: Vec<f64>,
    tol: f64,
    scl: Option<&Bound<'_, PyAny>>,
    s: f64,
    max_k: usize,
    max_len: Option<usize>,
    seed: u64,
    normalize: bool,
) -> PyResult<PySymbolicSeries> {
    let zero = 0.0f64.into_pyobject(py)?.into_any();
    let dcfg = digitization_config(scl.unwrap_or(&zero), s, max_k, seed)?;
    let ccfg = compression_config(tol, max_len)?;
    let raw = series(values)?;
    let (ts, mean, std) = if normalize {
        let n = core_normalize(&raw);
        (n.series, Some(n.mean), Some(n.std))
    } else {
        (raw, None, None)
    };
    let symbolic = py
        .detach(|| core_digitize(&core_compress(&ts, &ccfg), &dcfg, tol))
        .map_err(to_py)?;
    Ok(PySymbolicSeries {
        inner: symbolic,
        mean,
        std,
    })
}

/// Decodes a symbolic series (without denormalization).
#[pyfunction]
fn reconstruct(symbolic: &PySymbolicSeries) -> PyResult<Vec<f64>> {
    symbolic.reconstruct(false)
}

/// Returns `(normalized, mean, std)`.
#[pyfunction]
fn normalize(values: Vec<f64>) -> PyResult<(Vec<f64>, f64, f64)> {
    let n = core_normalize(&series(values)?);
    Ok((n.series.into_values(), n.mean, n.std))
}

/// Inverse of `normalize`.
#[pyfunction]
#[pyo3(name = "denormalize")]
fn py_denormalize(values: Vec<f64>, mean: f64, std: f64) -> Vec<f64> {
    denormalize(&values, mean, std)
}

/// Worst-case Euclidean error of the polygonal chain after compression.
#[pyfunction]
fn error_bound(series_length: usize, n_pieces: usize, tol: f64) -> PyResult<f64> {
    compression_error_bound(series_length, n_pieces, tol).map_err(to_py)
}

/// One of `euclid`, `dtw`, `euclid_diff`, `dtw_diff`.
#[pyfunction]
#[pyo3(signature = (a, b, kind = "euclid"))]
fn distance(py: Python<'_>, a: Vec<f64>, b: Vec<f64>, kind: &str) -> PyResult<f64> {
    let kind: DistanceKind = kind.parse().map_err(to_py)?;
    py.detach(|| kind.measure(&a, &b)).map_err(to_py)
}

#[pyfunction]
fn sax_encode(values: Vec<f64>, segment_len: usize, k: usize) -> PyResult<String> {
    let cfg = SaxConfig::new(segment_len, k).map_err(to_py)?;
    sax_symbolize(&values, &cfg).map_err(to_py)
}

#[pyfunction]
fn sax_decode(symbols: &str, segment_len: usize, k: usize, length: usize) -> PyResult<Vec<f64>> {
    let cfg = SaxConfig::new(segment_len, k).map_err(to_py)?;
    sax_reconstruct(symbols, &cfg, length).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (values, segment_len, k_mean = 3, k_slope = 3))]
fn onedsax_encode(values: Vec<f64>, segment_len: usize, k_mean: usize, k_slope: usize) -> PyResult<String> {
    let cfg = OneDSaxConfig::new(segment_len, k_mean, k_slope).map_err(to_py)?;
    onedsax_symbolize(&values, &cfg).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (symbols, segment_len, length, k_mean = 3, k_slope = 3))]
fn onedsax_decode(
    symbols: &str,
    segment_len: usize,
    length: usize,
    k_mean: usize,
    k_slope: usize,
) -> PyResult<Vec<f64>> {
    let cfg = OneDSaxConfig::new(segment_len, k_mean, k_slope).map_err(to_py)?;
    onedsax_reconstruct(symbols, &cfg, length).map_err(to_py)
}

/// Per-sample TARZAN scores of `test` against `reference`.
///
/// `segment_lengths[j]` is the number of samples test symbol `j` stands for;
/// it defaults to one sample per symbol.
#[pyfunction]
#[pyo3(signature = (reference, test, window, segment_lengths = None))]
fn tarzan_scores(
    reference: &str,
    test: &str,
    window: usize,
    segment_lengths: Option<Vec<usize>>,
) -> PyResult<Vec<f64>> {
    let spans = segment_lengths.unwrap_or_else(|| vec![1; test.chars().count()]);
    let scores = tarzan::tarzan_scores(reference, test, window, &spans).map_err(to_py)?;
    Ok(scores.sample_scores)
}

/// Symbolizes `reference` and `test` over one shared ABBA alphabet.
///
/// Returns `(reference_symbols, test_symbols, test_spans)`.
#[pyfunction]
#[pyo3(signature = (reference, test, tol, scl = None, s = DEFAULT_S, max_k = 9, max_len = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn abba_symbol_pair(
    py: Python<'_>,
    reference: Vec<f64>,
    test: Vec<f64>,
    tol: f64,
    scl: Option<&Bound<'_, PyAny>>,
    s: f64,
    max_k: usize,
    max_len: Option<usize>,
    seed: u64,
) -> PyResult<(String, String, Vec<usize>)> {
    let zero = 0.0f64.into_pyobject(py)?.into_any();
    let dcfg = digitization_config(scl.unwrap_or(&zero), s, max_k, seed)?;
    let ccfg = compression_config(tol, max_len)?;
    let pair = tarzan::abba_symbol_pair(&series(reference)?, &series(test)?, &ccfg, &dcfg).map_err(to_py)?;
    Ok((pair.reference, pair.test, pair.test_spans))
}

#[pymodule]
pub fn pyabba(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AbbaError", m.py().get_type::<AbbaError>())?;
    m.add_class::<PyPieces>()?;
    m.add_class::<PySymbolicSeries>()?;
    m.add_function(wrap_pyfunction!(compress, m)?)?;
    m.add_function(wrap_pyfunction!(digitize, m)?)?;
    m.add_function(wrap_pyfunction!(symbolize, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(py_denormalize, m)?)?;
    m.add_function(wrap_pyfunction!(error_bound, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(sax_encode, m)?)?;
    m.add_function(wrap_pyfunction!(sax_decode, m)?)?;
    m.add_function(wrap_pyfunction!(onedsax_encode, m)?)?;
    m.add_function(wrap_pyfunction!(onedsax_decode, m)?)?;
    m.add_function(wrap_pyfunction!(tarzan_scores, m)?)?;
    m.add_function(wrap_pyfunction!(abba_symbol_pair, m)?)?;
    Ok(())
}
