//! Optimal univariate k-means by dynamic programming.
//!
//! Values are sorted once; every optimal 1-D partition is contiguous in sorted
//! order, so cluster `m` of a `k`-partition covers a run `x[j..=i]`. Layer `m`
//! of the table is filled from layer `m - 1` with the divide-and-conquer
//! argmin search, which is valid because the segment cost satisfies the
//! quadrangle inequality. Layers are built on demand so the caller can scan
//! `k` upward and stop at the first acceptable partition.

use crate::error::{AbbaError, Result};

pub(crate) struct SortedDp {
    /// Permutation that sorts the input ascending (stable).
    order: Vec<usize>,
    sorted: Vec<f64>,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    /// `cost[m][i]`: minimal WCSS of `sorted[..=i]` split into `m + 1` runs.
    cost: Vec<Vec<f64>>,
    /// `split[m][i]`: first index of the last run in that optimum.
    split: Vec<Vec<usize>>,
}

impl SortedDp {
    pub(crate) fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(AbbaError::invalid("cannot cluster an empty set of values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(AbbaError::invalid("cannot cluster non-finite values"));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

        // Shift by the median before accumulating to limit cancellation.
        let shift = sorted[sorted.len() / 2];
        let mut sum = Vec::with_capacity(sorted.len());
        let mut sum_sq = Vec::with_capacity(sorted.len());
        let (mut s, mut s2) = (0.0, 0.0);
        for &x in &sorted {
            let d = x - shift;
            s += d;
            s2 += d * d;
            sum.push(s);
            sum_sq.push(s2);
        }

        let first: Vec<f64> = (0..sorted.len()).map(|i| segment_cost(&sum, &sum_sq, 0, i)).collect();
        Ok(SortedDp {
            order,
            sorted,
            sum,
            sum_sq,
            cost: vec![first],
            split: vec![vec![0; values.len()]],
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.sorted.len()
    }

    fn segment(&self, j: usize, i: usize) -> f64 {
        segment_cost(&self.sum, &self.sum_sq, j, i)
    }

    /// Makes layers up to `k` clusters available.
    fn ensure_layers(&mut self, k: usize) {
        let n = self.len();
        while self.cost.len() < k {
            let m = self.cost.len();
            let mut cost = vec![f64::INFINITY; n];
            let mut split = vec![0; n];
            if m < n {
                self.fill_layer(m, m, n - 1, m, n - 1, &mut cost, &mut split);
            }
            self.cost.push(cost);
            self.split.push(split);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_layer(
        &self,
        m: usize,
        lo: usize,
        hi: usize,
        opt_lo: usize,
        opt_hi: usize,
        cost: &mut [f64],
        split: &mut [usize],
    ) {
        // Iterative version of the usual recursion: (lo, hi, opt_lo, opt_hi).
        let mut stack = vec![(lo, hi, opt_lo, opt_hi)];
        let prev = &self.cost[m - 1];
        while let Some((lo, hi, opt_lo, opt_hi)) = stack.pop() {
            if lo > hi {
                continue;
            }
            let mid = lo + (hi - lo) / 2;
            let mut best = f64::INFINITY;
            let mut best_j = opt_lo.max(m);
            for j in opt_lo.max(m)..=opt_hi.min(mid) {
                let c = prev[j - 1] + self.segment(j, mid);
                if c < best {
                    best = c;
                    best_j = j;
                }
            }
            cost[mid] = best;
            split[mid] = best_j;
            if mid > lo {
                stack.push((lo, mid - 1, opt_lo, best_j));
            }
            stack.push((mid + 1, hi, best_j, opt_hi));
        }
    }

    /// Optimal partition into `k` runs (`1 <= k <= len`), returned as labels
    /// in input order; label 0 holds the smallest values.
    pub(crate) fn partition(&mut self, k: usize) -> Vec<usize> {
        let n = self.len();
        debug_assert!(k >= 1 && k <= n);
        self.ensure_layers(k);
        let mut sorted_labels = vec![0; n];
        let mut end = n;
        for m in (0..k).rev() {
            let start = if m == 0 { 0 } else { self.split[m][end - 1] };
            for label in &mut sorted_labels[start..end] {
                *label = m;
            }
            end = start;
        }
        let mut labels = vec![0; n];
        for (pos, &orig) in self.order.iter().enumerate() {
            labels[orig] = sorted_labels[pos];
        }
        labels
    }

    pub(crate) fn distinct_count(&self) -> usize {
        1 + self.sorted.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

fn segment_cost(sum: &[f64], sum_sq: &[f64], j: usize, i: usize) -> f64 {
    let m = (i - j + 1) as f64;
    let (s, s2) = if j == 0 {
        (sum[i], sum_sq[i])
    } else {
        (sum[i] - sum[j - 1], sum_sq[i] - sum_sq[j - 1])
    };
    (s2 - s * s / m).max(0.0)
}
