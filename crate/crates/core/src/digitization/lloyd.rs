//! Lloyd iteration for 2-D mean clustering with deterministic seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_ITERATIONS: usize = 300;

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}

pub(crate) fn distinct_points(points: &[[f64; 2]]) -> usize {
    let mut sorted: Vec<[f64; 2]> = points.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    sorted.dedup();
    sorted.len()
}

/// Seeded farthest-point spreading: a random first center, then repeatedly
/// the point farthest from all chosen centers (lowest index on ties).
fn initial_centers(points: &[[f64; 2]], k: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let first = rng.random_range(0..points.len());
    let mut centers = vec![points[first]];
    let mut nearest: Vec<f64> = points.iter().map(|&p| dist2(p, points[first])).collect();
    while centers.len() < k {
        let (idx, _) = nearest.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, &d)| if d > best.1 { (i, d) } else { best },
        );
        let c = points[idx];
        centers.push(c);
        for (d, &p) in nearest.iter_mut().zip(points) {
            *d = d.min(dist2(p, c));
        }
    }
    centers
}

fn nearest_center(p: [f64; 2], centers: &[[f64; 2]]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &c) in centers.iter().enumerate() {
        let d = dist2(p, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Clusters `points` into exactly `k` non-empty groups. `k` must not exceed
/// the number of distinct points.
pub(crate) fn lloyd(points: &[[f64; 2]], k: usize, seed: u64) -> Vec<usize> {
    let mut centers = initial_centers(points, k, seed);
    let mut labels: Vec<usize> = points.iter().map(|&p| nearest_center(p, &centers)).collect();

    for _ in 0..MAX_ITERATIONS {
        repair_empty(points, &mut labels, &mut centers);
        update_centers(points, &labels, &mut centers);
        let next: Vec<usize> = points.iter().map(|&p| nearest_center(p, &centers)).collect();
        if next == labels {
            break;
        }
        labels = next;
    }
    repair_empty(points, &mut labels, &mut centers);
    labels
}

fn update_centers(points: &[[f64; 2]], labels: &[usize], centers: &mut [[f64; 2]]) {
    let k = centers.len();
    let mut acc = vec![[0.0f64; 2]; k];
    let mut count = vec![0usize; k];
    for (&p, &l) in points.iter().zip(labels) {
        acc[l][0] += p[0];
        acc[l][1] += p[1];
        count[l] += 1;
    }
    for ((c, a), &m) in centers.iter_mut().zip(&acc).zip(&count) {
        if m > 0 {
            *c = [a[0] / m as f64, a[1] / m as f64];
        }
    }
}

/// Moves the point farthest from the center of the largest cluster into each
/// empty cluster, so the scan step keeps exactly `k` groups.
fn repair_empty(points: &[[f64; 2]], labels: &mut [usize], centers: &mut [[f64; 2]]) {
    let k = centers.len();
    loop {
        let mut count = vec![0usize; k];
        for &l in labels.iter() {
            count[l] += 1;
        }
        let Some(empty) = count.iter().position(|&c| c == 0) else {
            return;
        };
        let largest = (0..k).max_by_key(|&i| (count[i], std::cmp::Reverse(i))).unwrap_or(0);
        if count[largest] < 2 {
            return;
        }
        update_centers(points, labels, centers);
        let center = centers[largest];
        let far = (0..points.len())
            .filter(|&i| labels[i] == largest)
            .fold((usize::MAX, f64::NEG_INFINITY), |best, i| {
                let d = dist2(points[i], center);
                if d > best.1 {
                    (i, d)
                } else {
                    best
                }
            })
            .0;
        labels[far] = empty;
        centers[empty] = points[far];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_two_groups() {
        let pts = [[0.0, 0.0], [0.1, 0.0], [10.0, 10.0], [10.1, 10.0], [0.0, 0.1]];
        let labels = lloyd(&pts, 2, 7);
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[0], labels[4]);
        assert_eq!(labels[2], labels[3]);
        assert_ne!(labels[0], labels[2]);
    }

    #[test]
    fn never_leaves_a_cluster_empty() {
        let pts: Vec<[f64; 2]> = (0..12).map(|i| [i as f64, (i * i) as f64 * 0.1]).collect();
        for k in 1..=12 {
            for seed in 0..5 {
                let labels = lloyd(&pts, k, seed);
                let mut seen = vec![false; k];
                for &l in &labels {
                    seen[l] = true;
                }
                assert!(seen.iter().all(|&s| s), "k={k} seed={seed}");
            }
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let pts: Vec<[f64; 2]> = (0..30).map(|i| [(i % 7) as f64, (i % 5) as f64]).collect();
        assert_eq!(lloyd(&pts, 4, 3), lloyd(&pts, 4, 3));
    }
}
