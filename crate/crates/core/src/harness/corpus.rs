//! Seeded synthetic series for desk-scale experiments.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::ingest::LabeledSeries;
use crate::preprocessing::TimeSeries;

/// Seed of the bundled mini-corpus in `data/mini_corpus.tsv`.
pub const MINI_CORPUS_SEED: u64 = 2019;
pub const MINI_CORPUS_SIZE: usize = 20;

/// The bundled 20-series corpus (sines, trends, steps, walks and noise mixes).
pub const MINI_CORPUS_TSV: &str = include_str!("../../data/mini_corpus.tsv");

fn gaussian(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    Normal::new(0.0, sd).expect("valid sd").sample(rng)
}

fn sine(len: usize, period: f64, phase: f64) -> Vec<f64> {
    (0..len).map(|i| (TAU * i as f64 / period + phase).sin()).collect()
}

fn add_noise(values: &mut [f64], rng: &mut ChaCha8Rng, sd: f64) {
    for v in values {
        *v += gaussian(rng, sd);
    }
}

/// Generates the mini-corpus; `mini_corpus(MINI_CORPUS_SEED)` reproduces the
/// bundled file byte for byte.
pub fn mini_corpus(seed: u64) -> Vec<LabeledSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(MINI_CORPUS_SIZE);
    for i in 0..MINI_CORPUS_SIZE {
        let len = rng.random_range(250..=600);
        let (family, values) = match i {
            0..=3 => {
                let period = rng.random_range(20.0..90.0);
                let mut v = sine(len, period, rng.random_range(0.0..TAU));
                add_noise(&mut v, &mut rng, 0.05);
                ("sine", v)
            }
            4..=6 => {
                let period = rng.random_range(25.0..80.0);
                let slope = rng.random_range(-0.01..0.01);
                let mut v = sine(len, period, 0.0);
                for (t, x) in v.iter_mut().enumerate() {
                    *x += slope * t as f64;
                }
                add_noise(&mut v, &mut rng, 0.08);
                ("trend", v)
            }
            7..=9 => {
                let mut level = 0.0;
                let mut v = Vec::with_capacity(len);
                for _ in 0..len {
                    if rng.random_bool(0.02) {
                        level = rng.random_range(-2.0..2.0);
                    }
                    v.push(level);
                }
                add_noise(&mut v, &mut rng, 0.05);
                ("steps", v)
            }
            10..=12 => {
                let mut x = 0.0;
                let v = (0..len)
                    .map(|_| {
                        x += gaussian(&mut rng, 1.0);
                        x
                    })
                    .collect();
                ("walk", v)
            }
            13..=14 => {
                let period = rng.random_range(30.0..70.0);
                let mut v: Vec<f64> = (0..len).map(|t| (t as f64 / period).fract()).collect();
                add_noise(&mut v, &mut rng, 0.02);
                ("sawtooth", v)
            }
            15..=16 => {
                let f0 = rng.random_range(0.005..0.02);
                let f1 = rng.random_range(0.03..0.06);
                let mut v: Vec<f64> = (0..len)
                    .map(|t| {
                        let t = t as f64;
                        let rate = (f1 - f0) / len as f64;
                        (TAU * (f0 * t + 0.5 * rate * t * t)).sin()
                    })
                    .collect();
                add_noise(&mut v, &mut rng, 0.05);
                ("chirp", v)
            }
            17 => {
                let mut x = 0.0;
                let v = (0..len)
                    .map(|_| {
                        x = 0.95 * x + gaussian(&mut rng, 0.3);
                        x
                    })
                    .collect();
                ("ar1", v)
            }
            18 => {
                let period = rng.random_range(30.0..60.0);
                let mut v: Vec<f64> = sine(len, period, 0.0)
                    .into_iter()
                    .enumerate()
                    .map(|(t, x)| x * (-(t as f64) / len as f64 * 2.0).exp())
                    .collect();
                add_noise(&mut v, &mut rng, 0.02);
                ("damped", v)
            }
            _ => {
                let a = sine(len, rng.random_range(40.0..100.0), 0.0);
                let b = sine(len, rng.random_range(8.0..15.0), 1.0);
                let mut v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + 0.4 * y).collect();
                add_noise(&mut v, &mut rng, 0.05);
                ("mix", v)
            }
        };
        out.push(LabeledSeries {
            id: format!("mini-{i:02}-{family}"),
            label: Some(family.to_string()),
            series: TimeSeries::new(values).expect("synthetic series are finite"),
        });
    }
    out
}

/// The bundled corpus, parsed, with ids `mini-XX-<family>`.
pub fn bundled_mini_corpus() -> Vec<LabeledSeries> {
    let parsed = super::ingest::parse_ucr(MINI_CORPUS_TSV, "mini_corpus.tsv").expect("bundled corpus parses");
    parsed
        .into_iter()
        .enumerate()
        .map(|(i, mut s)| {
            s.id = format!("mini-{i:02}-{}", s.label.as_deref().unwrap_or("series"));
            s
        })
        .collect()
}
