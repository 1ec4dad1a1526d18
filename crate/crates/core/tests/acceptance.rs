//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use abba::baselines::{gaussian_breakpoints, onedsax_symbolize, sax_symbolize, OneDSaxConfig, SaxConfig};
use abba::compression::chain_points;
use abba::digitization::cluster_1d;
use abba::distances::{dtw, euclid};
use abba::harness::{bundled_mini_corpus, profile_csv, run_comparison, ExperimentConfig};
use abba::reconstruction::quantized_pieces;
use abba::tarzan::{abba_symbol_pair, tarzan_scores};
use abba::{compress, digitize, reconstruct, CompressionConfig, DigitizationConfig, DistanceKind, TimeSeries};
use common::{chord_residual, dtw_by_enumeration, group_variances, interpolate, seeded_series, sq_euclid};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Compresses the shared seeded corpus; every third series gets a `max_len`.
fn corpus_item(seed: u64) -> (TimeSeries, CompressionConfig) {
    let (ts, tol) = seeded_series(seed);
    let mut cfg = CompressionConfig::new(tol).unwrap();
    if seed % 3 == 2 {
        cfg = cfg.with_max_len(5 + (seed as usize * 7) % 46).unwrap();
    }
    (ts, cfg)
}

fn compression_bound() -> Outcome {
    let start = Instant::now();
    let mut violations = 0;
    for seed in 0..1000 {
        let (ts, cfg) = corpus_item(seed);
        let pieces = compress(&ts, &cfg);
        let big_n = ts.last_index();
        // The chain through the original samples at the breakpoints.
        let mut breakpoints = vec![(0, ts.values()[0])];
        let mut i = 0;
        for p in &pieces.pieces {
            i += p.len;
            breakpoints.push((i, ts.values()[i]));
        }
        let chain = interpolate(&breakpoints);
        let tol = cfg.tol();
        if i != big_n || sq_euclid(ts.values(), &chain) > (big_n - pieces.len()) as f64 * tol * tol {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    check(
        violations == 0 && elapsed < Duration::from_secs(10),
        format!("{violations} violations in 1000 series, {elapsed:.2?}"),
    )
}

fn greedy_maximality() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    for seed in 0..1000 {
        let (ts, cfg) = corpus_item(seed);
        let pieces = compress(&ts, &cfg);
        let tol2 = cfg.tol() * cfg.tol();
        let mut start = 0;
        for (j, p) in pieces.pieces.iter().enumerate() {
            let end = start + p.len;
            if chord_residual(ts.values(), start, end) > (p.len - 1) as f64 * tol2 {
                violations += 1;
            }
            let is_final = j + 1 == pieces.len();
            let capped = cfg.max_len() == Some(p.len);
            if !is_final && !capped {
                checked += 1;
                if chord_residual(ts.values(), start, end + 1) <= p.len as f64 * tol2 {
                    violations += 1;
                }
            }
            start = end;
        }
    }
    check(
        violations == 0,
        format!("{violations} violations over {checked} extendable pieces"),
    )
}

fn rational_wcss(sorted: &[Ratio<i64>], groups: &[usize]) -> Ratio<i64> {
    let mut total = Ratio::from_integer(0);
    let mut at = 0;
    for &size in groups {
        let part = &sorted[at..at + size];
        let sum: Ratio<i64> = part.iter().copied().sum();
        let sum_sq: Ratio<i64> = part.iter().map(|v| v * v).sum();
        total += sum_sq - sum * sum / Ratio::from_integer(size as i64);
        at += size;
    }
    total
}

/// All ways to split `n` sorted values into `k` non-empty contiguous groups.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    (1..=n - (k - 1))
        .flat_map(|first| {
            compositions(n - first, k - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn optimal_1d_clustering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let cases = 12_000;
    for _ in 0..cases {
        let n = rng.random_range(1..=10usize);
        let k = rng.random_range(1..=n.min(4));
        let halves: Vec<i64> = (0..n).map(|_| rng.random_range(-10..=10)).collect();
        let values: Vec<f64> = halves.iter().map(|&h| h as f64 / 2.0).collect();
        let mut sorted: Vec<Ratio<i64>> = halves.iter().map(|&h| Ratio::new(h, 2)).collect();
        sorted.sort();
        let optimum = compositions(n, k)
            .iter()
            .map(|g| rational_wcss(&sorted, g))
            .min()
            .unwrap();

        let result = cluster_1d(&values, 0.0, k, k).unwrap();
        // WCSS of the returned partition, recomputed exactly.
        let mut achieved = Ratio::from_integer(0);
        for c in 0..result.k {
            let members: Vec<Ratio<i64>> = halves
                .iter()
                .zip(&result.assignments)
                .filter(|(_, &l)| l == c)
                .map(|(&h, _)| Ratio::new(h, 2))
                .collect();
            if members.is_empty() {
                continue;
            }
            let sum: Ratio<i64> = members.iter().copied().sum();
            let sum_sq: Ratio<i64> = members.iter().map(|v| v * v).sum();
            achieved += sum_sq - sum * sum / Ratio::from_integer(members.len() as i64);
        }
        if achieved != optimum {
            mismatches += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatches in {cases} cases"))
}

fn variance_criterion() -> Outcome {
    let config = DigitizationConfig::default();
    let mut failures = Vec::new();
    let mut below_max = 0;
    for seed in 10_000..10_500 {
        let (ts, tol) = seeded_series(seed);
        let pieces = compress(&ts, &CompressionConfig::new(tol).unwrap());
        let sym = digitize(&pieces, &config, tol).unwrap();
        let (big_n, n) = (ts.last_index() as f64, pieces.len() as f64);
        let tol_s = tol / 0.2 * (6.0 * (big_n - n) / (big_n * n)).sqrt();
        if (sym.model.tol_s - tol_s).abs() > 1e-12 * tol_s {
            failures.push(format!("seed {seed}: tol_s {} vs {tol_s}", sym.model.tol_s));
            continue;
        }
        let k = sym.model.k;
        if k >= config.max_k {
            continue;
        }
        below_max += 1;
        let incs = pieces.increments();
        let worst = group_variances(&incs, &sym.model.assignments, k)
            .into_iter()
            .fold(0.0, f64::max);
        // Relative slack of a few ulps for the independent recomputation.
        if worst > tol_s * tol_s * (1.0 + 1e-12) {
            failures.push(format!("seed {seed}: k={k} variance {worst} > {}", tol_s * tol_s));
        }
        if k > config.min_k {
            let smaller = cluster_1d(&incs, tol_s, k - 1, k - 1).unwrap();
            let worst_smaller = group_variances(&incs, &smaller.assignments, smaller.k)
                .into_iter()
                .fold(0.0, f64::max);
            if worst_smaller <= tol_s * tol_s {
                failures.push(format!("seed {seed}: k-1={} already satisfies the bound", k - 1));
            }
        }
    }
    check(
        failures.is_empty() && below_max > 0,
        format!(
            "{} violations, {below_max}/500 series with k < max_k{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn bridge_pinning() -> Outcome {
    let mut failures = Vec::new();
    for seed in 20_000..21_000u64 {
        let (ts, tol) = seeded_series(seed);
        let scl = [0.0, 1.0, f64::INFINITY][(seed % 3) as usize];
        let pieces = compress(&ts, &CompressionConfig::new(tol).unwrap());
        let config = DigitizationConfig {
            scl,
            seed,
            ..DigitizationConfig::default()
        };
        let sym = digitize(&pieces, &config, tol).unwrap();
        let big_n = ts.last_index();
        let total: usize = quantized_pieces(&sym).unwrap().pieces.iter().map(|p| p.0).sum();
        let rec = reconstruct(&sym).unwrap();
        let gap = (rec.values()[big_n] - ts.values()[big_n]).abs();
        if total != big_n || rec.len() != big_n + 1 || gap > 1e-9 * big_n as f64 {
            failures.push(format!(
                "seed {seed} scl {scl}: lengths {total}/{big_n}, endpoint gap {gap:e}"
            ));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} failures in 1000 series{}",
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn bridge_variance_shape() -> Outcome {
    let mut ratios = Vec::new();
    let mut seed = 30_000u64;
    while ratios.len() < 500 {
        let (ts, tol) = seeded_series(seed);
        seed += 1;
        let pieces = compress(&ts, &CompressionConfig::new(tol).unwrap());
        let n = pieces.len();
        if n < 50 {
            continue;
        }
        let sym = digitize(&pieces, &DigitizationConfig::default(), tol).unwrap();
        // Centers recomputed as increment means per symbol.
        let k = sym.model.k;
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in pieces.pieces.iter().zip(&sym.model.assignments) {
            sums[l] += p.inc;
            counts[l] += 1;
        }
        let half = n / 2;
        let e: f64 = pieces.pieces[..half]
            .iter()
            .zip(&sym.model.assignments)
            .map(|(p, &l)| sums[l] / counts[l] as f64 - p.inc)
            .sum();
        let z = e / sym.model.tol_s;
        ratios.push(z * z / (n as f64 / 4.0));
    }
    let pooled = ratios.iter().sum::<f64>() / ratios.len() as f64;
    check(
        (0.5..=2.0).contains(&pooled),
        format!(
            "pooled Var(e_(n/2)/tol_s) / (n/4) = {pooled:.3} over 500 series (seeds 30000..{seed}); required [0.5, 2]"
        ),
    )
}

fn dtw_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unit = Normal::new(0.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    let pairs = 2000;
    for _ in 0..pairs {
        let a: Vec<f64> = (0..rng.random_range(1..=6)).map(|_| unit.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..rng.random_range(1..=6)).map(|_| unit.sample(&mut rng)).collect();
        worst = worst.max((dtw(&a, &b).unwrap() - dtw_by_enumeration(&a, &b)).abs());
    }
    check(worst <= 1e-12, format!("max deviation {worst:e} over {pairs} pairs"))
}

fn performance_profile_direction() -> Outcome {
    let start = Instant::now();
    let corpus = bundled_mini_corpus();
    let matrix = run_comparison(&corpus, &ExperimentConfig::default()).unwrap();
    let included = matrix.rows.len();
    let dtw_diff = matrix.table(DistanceKind::DtwDiff).unwrap();
    let abba_best = dtw_diff.iter().filter(|r| r[0] <= r[1] && r[0] <= r[2]).count();
    let plain = matrix.table(DistanceKind::Euclid).unwrap();
    let sax_wins = plain.iter().filter(|r| r[1] < r[2]).count();
    let elapsed = start.elapsed();
    check(
        included > 0
            && matrix.failures.is_empty()
            && abba_best as f64 >= 0.6 * included as f64
            && sax_wins as f64 >= 0.5 * included as f64
            && elapsed < Duration::from_secs(60),
        format!(
            "ABBA best under dtw_diff on {abba_best}/{included}, SAX beats 1d-SAX under euclid on {sax_wins}/{included}, \
             {} excluded, {} failed, {elapsed:.2?}",
            matrix.excluded.len(),
            matrix.failures.len()
        ),
    )
}

/// A temperature-like proxy: slow ramps with sharp resets, a slow
/// oscillation, drift and sensor noise.
fn heat_exchanger_proxy() -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(7127);
    let unit = Normal::new(0.0, 1.0).unwrap();
    let mut drift = 0.0;
    let values = (0..=7127)
        .map(|i| {
            let t = i as f64;
            drift += 0.002 * unit.sample(&mut rng);
            let cycle = (t % 1400.0) / 1400.0;
            4.0 * cycle + (t / 310.0).sin() + 0.3 * (t / 45.0).sin() + drift + 0.01 * unit.sample(&mut rng)
        })
        .collect();
    TimeSeries::new(values).unwrap()
}

fn heat_exchanger_bound() -> Outcome {
    let ts = heat_exchanger_proxy();
    let tol = 0.1;
    let pieces = compress(&ts, &CompressionConfig::new(tol).unwrap());
    let big_n = ts.last_index();
    let n = pieces.len();
    let bound = ((big_n - n) as f64).sqrt() * tol;
    let breakpoints: Vec<(usize, f64)> = chain_points(&pieces)
        .iter()
        .map(|&(i, _)| (i, ts.values()[i]))
        .collect();
    let chain = interpolate(&breakpoints);
    let chain_err = euclid(ts.values(), &chain).unwrap();
    let sym = digitize(&pieces, &DigitizationConfig::default(), tol).unwrap();
    let rec = reconstruct(&sym).unwrap();
    let dtw_err = dtw(ts.values(), rec.values()).unwrap();
    check(
        chain_err <= bound && dtw_err <= 3.0 * bound,
        format!(
            "N={big_n}, n={n}, k={}: euclid(T, chain)={chain_err:.2}, dtw(T, rec)={dtw_err:.2}, bound={bound:.2}",
            sym.model.k
        ),
    )
}

fn tarzan_toy() -> Outcome {
    const PERIOD: f64 = 25.0;
    const L: usize = 3;
    const THRESHOLD: f64 = 0.5;
    let reference: Vec<f64> = (0..250).map(|i| (TAU * i as f64 / PERIOD).sin()).collect();
    // The fifth wave (samples 100..125) becomes 22 flat samples.
    let mut test = reference[..100].to_vec();
    test.extend(std::iter::repeat_n(0.0, 22));
    test.extend_from_slice(&reference[125..]);
    let anomaly_end = 122;

    let stats = abba::normalize(&TimeSeries::new(reference.clone()).unwrap());
    let scale = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| (x - stats.mean) / stats.std).collect() };
    let (r, x) = (scale(&reference), scale(&test));
    let w = 5;
    let covered = x.len() / w * w;

    let sax = SaxConfig::new(w, 9).unwrap();
    let sax_r = sax_symbolize(&r, &sax).unwrap();
    let sax_x = sax_symbolize(&x[..covered], &sax).unwrap();
    let sax_scores = tarzan_scores(&sax_r, &sax_x, L, &vec![w; sax_x.len()]).unwrap();
    let od = OneDSaxConfig::new(w, 3, 3).unwrap();
    let od_r = onedsax_symbolize(&r, &od).unwrap();
    let od_x = onedsax_symbolize(&x[..covered], &od).unwrap();
    let od_scores = tarzan_scores(&od_r, &od_x, L, &vec![w; od_x.len()]).unwrap();

    // Smallest tolerance giving at most as many test pieces as SAX symbols.
    let target = sax_x.chars().count();
    let (rt, xt) = (TimeSeries::new(r).unwrap(), TimeSeries::new(x).unwrap());
    let (mut lo, mut hi) = (1e-4, 2.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if compress(&xt, &CompressionConfig::new(mid).unwrap()).len() > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dc = DigitizationConfig {
        max_k: 9,
        ..DigitizationConfig::default()
    };
    let pair = abba_symbol_pair(&rt, &xt, &CompressionConfig::new(hi).unwrap(), &dc).unwrap();
    let abba_scores = tarzan_scores(&pair.reference, &pair.test, L, &pair.test_spans).unwrap();

    let post = |s: &[f64]| s.iter().skip(anomaly_end).filter(|v| v.abs() > THRESHOLD).count();
    let (a, s, o) = (
        post(&abba_scores.sample_scores),
        post(&sax_scores.sample_scores),
        post(&od_scores.sample_scores),
    );
    check(
        a < s,
        format!(
            "post-anomaly samples above {THRESHOLD}: ABBA {a}, SAX {s}, 1d-SAX {o} (strings {}/{} symbols, k={})",
            pair.test.chars().count(),
            target,
            pair.joint.model.k
        ),
    )
}

fn breakpoint_goldens() -> Outcome {
    let text = include_str!("golden/normal_breakpoints.tsv");
    let mut worst: f64 = 0.0;
    let mut ks = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let mut fields = line.split('\t');
        let k: usize = fields.next().unwrap().parse().unwrap();
        let golden: Vec<f64> = fields.map(|f| f.parse().unwrap()).collect();
        let got = gaussian_breakpoints(k).unwrap();
        if got.len() != golden.len() {
            return Err(format!("k={k}: {} breakpoints, expected {}", got.len(), golden.len()));
        }
        for (g, e) in got.iter().zip(&golden) {
            worst = worst.max((g - e).abs());
        }
        ks.push(k);
    }
    let expected: Vec<usize> = (2..=20).collect();
    check(
        ks == expected && worst <= 1e-6,
        format!("k = 2..20, max deviation {worst:e}"),
    )
}

fn determinism() -> Outcome {
    let corpus = bundled_mini_corpus();
    let mut differing = Vec::new();
    for scl in [0.0, 1.0] {
        let config = ExperimentConfig {
            scl,
            seed: 11,
            ..ExperimentConfig::default()
        };
        let run = || -> Vec<String> {
            let m = run_comparison(&corpus, &config).unwrap();
            let mut out = vec![m.to_csv().unwrap()];
            for kind in DistanceKind::ALL {
                out.push(profile_csv(&m.profile(kind).unwrap()));
            }
            out
        };
        let (first, second) = (run(), run());
        if first != second {
            differing.push(scl);
        }
    }
    check(
        differing.is_empty(),
        format!("error matrix and 4 profiles compared byte for byte at scl 0 and 1; differing: {differing:?}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("compression bound", compression_bound),
        ("greedy maximality", greedy_maximality),
        ("optimal 1-D clustering", optimal_1d_clustering),
        ("variance criterion", variance_criterion),
        ("bridge pinning", bridge_pinning),
        ("bridge variance shape", bridge_variance_shape),
        ("dtw oracle", dtw_oracle),
        ("performance profile direction", performance_profile_direction),
        ("heat-exchanger bound", heat_exchanger_bound),
        ("tarzan toy experiment", tarzan_toy),
        ("breakpoint goldens", breakpoint_goldens),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}) [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
