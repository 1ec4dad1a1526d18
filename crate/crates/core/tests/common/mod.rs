//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use abba::preprocessing::normalize;
use abba::TimeSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const TOLERANCES: [f64; 10] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5];

/// A z-normalized random series of length `N + 1` with `N` in `[100, 2000]`,
/// drawn from one of five families, and a tolerance from [`TOLERANCES`].
pub fn seeded_series(seed: u64) -> (TimeSeries, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big_n = rng.random_range(100..=2000usize);
    let tol = TOLERANCES[rng.random_range(0..TOLERANCES.len())];
    let unit = Normal::new(0.0, 1.0).unwrap();
    let values: Vec<f64> = match seed % 5 {
        0 => {
            let mut x = 0.0;
            (0..=big_n)
                .map(|_| {
                    x += unit.sample(&mut rng);
                    x
                })
                .collect()
        }
        1 => {
            let period = rng.random_range(10.0..200.0);
            let noise = rng.random_range(0.0..0.3);
            (0..=big_n)
                .map(|i| (std::f64::consts::TAU * i as f64 / period).sin() + noise * unit.sample(&mut rng))
                .collect()
        }
        2 => {
            let mut v = vec![0.0];
            let mut x = 0.0;
            while v.len() <= big_n {
                let len = rng.random_range(2..=40);
                let inc: f64 = rng.random_range(-3.0..3.0);
                for t in 1..=len {
                    v.push(x + inc * t as f64 / len as f64);
                }
                x += inc;
            }
            v.truncate(big_n + 1);
            v
        }
        3 => {
            let slope = rng.random_range(-0.01..0.01);
            let mut x = 0.0;
            (0..=big_n)
                .map(|i| {
                    x = 0.9 * x + 0.5 * unit.sample(&mut rng);
                    x + slope * i as f64
                })
                .collect()
        }
        _ => {
            let mut level = 0.0;
            (0..=big_n)
                .map(|_| {
                    if rng.random_bool(0.01) {
                        level = rng.random_range(-5.0..5.0);
                    }
                    level + 0.05 * unit.sample(&mut rng)
                })
                .collect()
        }
    };
    let ts = TimeSeries::new(values).unwrap();
    (normalize(&ts).series, tol)
}

/// Linear interpolation through `(index, value)` breakpoints starting at 0.
pub fn interpolate(breakpoints: &[(usize, f64)]) -> Vec<f64> {
    let mut out = vec![breakpoints[0].1];
    for pair in breakpoints.windows(2) {
        let ((i0, v0), (i1, v1)) = (pair[0], pair[1]);
        let span = (i1 - i0) as f64;
        for i in i0 + 1..=i1 {
            out.push(v0 + (v1 - v0) * (i - i0) as f64 / span);
        }
    }
    out
}

/// Squared distance of the samples strictly inside `[start, end]` from the
/// chord joining `values[start]` and `values[end]`.
pub fn chord_residual(values: &[f64], start: usize, end: usize) -> f64 {
    let (a, b) = (values[start], values[end]);
    let span = (end - start) as f64;
    (start + 1..end)
        .map(|i| {
            let line = a + (b - a) * (i - start) as f64 / span;
            (values[i] - line).powi(2)
        })
        .sum()
}

pub fn sq_euclid(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Minimum over all monotone warping paths of the summed squared cost,
/// found by enumerating every path.
pub fn dtw_by_enumeration(a: &[f64], b: &[f64]) -> f64 {
    fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (a[i] - b[j]).powi(2);
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best.sqrt()
}

/// Population variance of each labelled group, two-pass.
pub fn group_variances(values: &[f64], labels: &[usize], k: usize) -> Vec<f64> {
    (0..k)
        .map(|c| {
            let members: Vec<f64> = values
                .iter()
                .zip(labels)
                .filter(|(_, &l)| l == c)
                .map(|(&v, _)| v)
                .collect();
            if members.is_empty() {
                return 0.0;
            }
            let m = members.iter().sum::<f64>() / members.len() as f64;
            members.iter().map(|v| (v - m).powi(2)).sum::<f64>() / members.len() as f64
        })
        .collect()
}
