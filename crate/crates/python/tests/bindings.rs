use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module<F: for<'py> FnOnce(Python<'py>, &Bound<'py, PyModule>)>(f: F) {
    Python::attach(|py| {
        let m = PyModule::new(py, "pyabba").unwrap();
        pyabba::pyabba(&m).unwrap();
        f(py, &m);
    });
}

fn run(py: Python<'_>, m: &Bound<'_, PyModule>, code: &str) {
    let globals = PyDict::new(py);
    globals.set_item("pyabba", m).unwrap();
    let code = std::ffi::CString::new(code).unwrap();
    if let Err(e) = py.run(&code, Some(&globals), None) {
        e.display(py);
        panic!("python snippet failed");
    }
}

#[test]
fn round_trip_through_python() {
    with_module(|py, m| {
        run(
            py,
            m,
            r#"
import math
values = [math.sin(i / 6.0) * (1 + i / 300.0) for i in range(300)]
s = pyabba.symbolize(values, 0.1)
rec = s.reconstruct()
assert len(rec) == 300
assert abs(rec[0] - values[0]) < 1e-9
assert pyabba.SymbolicSeries.from_json(s.to_json()).symbols == s.symbols
assert len(s.with_symbols(s.symbols[:3]).reconstruct(False)) >= 3
"#,
        );
    });
}

#[test]
fn pieces_match_the_core_crate() {
    with_module(|py, m| {
        let values: Vec<f64> = (0..200).map(|i| (i as f64 / 7.0).cos()).collect();
        let pieces = m.getattr("compress").unwrap().call1((values.clone(), 0.05)).unwrap();
        let lengths: Vec<usize> = pieces.getattr("lengths").unwrap().extract().unwrap();
        let ts = abba::TimeSeries::new(values).unwrap();
        let expected = abba::compress(&ts, &abba::CompressionConfig::new(0.05).unwrap());
        assert_eq!(lengths, expected.pieces.iter().map(|p| p.len).collect::<Vec<_>>());
        let _ = py;
    });
}

#[test]
fn scl_accepts_numbers_and_inf() {
    with_module(|py, m| {
        run(
            py,
            m,
            r#"
p = pyabba.compress([float(i % 7) for i in range(150)], 0.2)
for scl in (0, 0.5, "inf", float("inf")):
    s = pyabba.digitize(p, 0.2, scl=scl)
    assert len(s) == len(p)
"#,
        );
    });
}

#[test]
fn invalid_input_raises_abba_error() {
    with_module(|py, m| {
        run(
            py,
            m,
            r#"
def raises(f, *args, **kw):
    try:
        f(*args, **kw)
    except pyabba.AbbaError as e:
        assert isinstance(e, ValueError)
        return
    raise AssertionError(f"{f.__name__} did not raise")

raises(pyabba.compress, [1.0, 2.0], -0.1)
raises(pyabba.compress, [], 0.1)
raises(pyabba.digitize, pyabba.compress([1.0, 2.0, 0.0], 0.1), 0.1, scl="wide")
raises(pyabba.distance, [1.0], [1.0], "manhattan")
raises(pyabba.sax_encode, [1.0] * 10, 0, 4)
raises(pyabba.SymbolicSeries.from_json, "{}")
raises(pyabba.Pieces, 0.0, [(0, 1.0)])
"#,
        );
    });
}
