//! TARZAN-style anomaly scoring on symbol strings.
//!
//! Substring counts in the test string are compared with expectations
//! derived from a reference string. The discrepancy is divided by the larger
//! of the two frequencies so every score lies in `[-1, 1]`; positive scores
//! mean a substring is over-represented in the test string.

mod suffix_automaton;

use crate::compression::{compress, CompressionConfig, PieceSequence};
use crate::digitization::{digitize, DigitizationConfig, SymbolicSeries};
use crate::error::{AbbaError, Result};
use crate::preprocessing::TimeSeries;
use crate::reconstruction::quantize;
use suffix_automaton::SuffixAutomaton;

/// Substring-count index over a symbol string.
#[derive(Clone, Debug)]
pub struct FrequencyIndex {
    source: Vec<char>,
    automaton: SuffixAutomaton,
}

impl FrequencyIndex {
    pub fn new(source: &str) -> Self {
        let source: Vec<char> = source.chars().collect();
        let automaton = SuffixAutomaton::new(&source);
        FrequencyIndex { source, automaton }
    }

    /// Symbols in the indexed string.
    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// Number of (overlapping) occurrences. The empty pattern counts once per
    /// symbol.
    pub fn count(&self, pattern: &str) -> usize {
        let chars: Vec<char> = pattern.chars().collect();
        self.count_chars(&chars)
    }

    fn count_chars(&self, pattern: &[char]) -> usize {
        if pattern.is_empty() {
            self.source.len()
        } else {
            self.automaton.count(pattern)
        }
    }

    /// Number of length-`l` windows, `|source| - l + 1` (0 when too short).
    pub fn windows(&self, l: usize) -> usize {
        (self.source.len() + 1).saturating_sub(l)
    }
}

/// Expected number of occurrences of `w` among `test_windows` test windows.
///
/// Observed substrings are scaled from the reference window count. Unseen
/// ones fall back to a first-order Markov estimate from the two overlapping
/// `(l-1)`-grams, `f(w[..l-1]) f(w[1..]) / f(w[1..l-1])`, which is 0 as soon
/// as either gram is missing from the reference.
pub fn expected_frequency(reference: &FrequencyIndex, w: &str, test_windows: usize) -> Result<f64> {
    let chars: Vec<char> = w.chars().collect();
    let l = chars.len();
    if l == 0 {
        return Err(AbbaError::invalid("cannot score an empty substring"));
    }
    let scale = test_windows as f64 / reference.windows(l).max(1) as f64;
    let observed = reference.count_chars(&chars);
    if observed > 0 {
        return Ok(observed as f64 * scale);
    }
    if l == 1 {
        return Ok(0.0);
    }
    let head = reference.count_chars(&chars[..l - 1]);
    let tail = reference.count_chars(&chars[1..]);
    let overlap = reference.count_chars(&chars[1..l - 1]);
    if head == 0 || tail == 0 || overlap == 0 {
        return Ok(0.0);
    }
    Ok(head as f64 * tail as f64 / overlap as f64 * scale)
}

/// `(actual - expected) / max(actual, expected, 1)`.
pub fn adapted_score(actual: f64, expected: f64) -> f64 {
    (actual - expected) / actual.max(expected).max(1.0)
}

/// Scores of every test window and their projection onto the time axis.
#[derive(Clone, Debug, PartialEq)]
pub struct AnomalyScoreSeries {
    pub window: usize,
    /// Score of the substring starting at each symbol position.
    pub window_scores: Vec<f64>,
    /// Per time sample: the covering window score of largest magnitude.
    pub sample_scores: Vec<f64>,
}

impl AnomalyScoreSeries {
    /// Maximal runs of samples with `|score| > threshold`, as half-open
    /// `(start, end)` index pairs.
    pub fn exceedances(&self, threshold: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut open = None;
        for (i, s) in self.sample_scores.iter().enumerate() {
            match (s.abs() > threshold, open) {
                (true, None) => open = Some(i),
                (false, Some(start)) => {
                    out.push((start, i));
                    open = None;
                }
                _ => {}
            }
        }
        if let Some(start) = open {
            out.push((start, self.sample_scores.len()));
        }
        out
    }
}

/// Adapted TARZAN scores of every length-`l` window of `test`.
///
/// `segment_lengths[j]` is the number of time samples symbol `j` of the test
/// string stands for.
pub fn tarzan_scores(reference: &str, test: &str, l: usize, segment_lengths: &[usize]) -> Result<AnomalyScoreSeries> {
    let test_chars: Vec<char> = test.chars().collect();
    if l == 0 {
        return Err(AbbaError::invalid("window length must be at least 1"));
    }
    if l > test_chars.len() {
        return Err(AbbaError::invalid(format!(
            "window length {l} exceeds the test string length {}",
            test_chars.len()
        )));
    }
    if segment_lengths.len() != test_chars.len() {
        return Err(AbbaError::invalid(format!(
            "{} segment lengths for {} test symbols",
            segment_lengths.len(),
            test_chars.len()
        )));
    }
    let reference = FrequencyIndex::new(reference);
    let test_index = FrequencyIndex::new(test);
    let n_windows = test_index.windows(l);

    let window_scores = (0..n_windows)
        .map(|i| {
            let w: String = test_chars[i..i + l].iter().collect();
            let actual = test_index.count(&w) as f64;
            let expected = expected_frequency(&reference, &w, n_windows)?;
            Ok(adapted_score(actual, expected))
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut sample_scores = Vec::with_capacity(segment_lengths.iter().sum());
    for (j, &span) in segment_lengths.iter().enumerate() {
        let first = j.saturating_sub(l - 1);
        let last = j.min(n_windows - 1);
        let score =
            window_scores[first..=last]
                .iter()
                .copied()
                .fold(0.0f64, |best, s| if s.abs() > best.abs() { s } else { best });
        sample_scores.extend(std::iter::repeat_n(score, span));
    }

    Ok(AnomalyScoreSeries {
        window: l,
        window_scores,
        sample_scores,
    })
}

/// Reference and test strings over one shared ABBA alphabet.
#[derive(Clone, Debug)]
pub struct SymbolPair {
    pub reference: String,
    pub test: String,
    /// Time samples covered by each test symbol (sums to the test length).
    pub test_spans: Vec<usize>,
    pub joint: SymbolicSeries,
}

/// Compresses both series separately and digitizes their pieces jointly so
/// symbols mean the same thing in both strings.
pub fn abba_symbol_pair(
    reference: &TimeSeries,
    test: &TimeSeries,
    compression: &CompressionConfig,
    digitization: &DigitizationConfig,
) -> Result<SymbolPair> {
    let r = compress(reference, compression);
    let x = compress(test, compression);
    let joint = digitize(&PieceSequence::concat(&[&r, &x]), digitization, compression.tol())?;
    let symbols: Vec<char> = joint.symbols.chars().collect();
    let (rs, xs) = symbols.split_at(r.len());

    let centers: Vec<(f64, f64)> = joint.model.assignments[r.len()..]
        .iter()
        .map(|&c| (joint.model.centers[c].len, joint.model.centers[c].inc))
        .collect();
    let quantized = quantize(&centers, x.start_value, x.original_length);
    let mut test_spans: Vec<usize> = quantized.pieces.iter().map(|p| p.0).collect();
    // A merged zero-length piece leaves fewer spans than symbols; the symbol
    // still exists, so it gets an empty span.
    test_spans.resize(xs.len(), 0);
    if let Some(last) = test_spans.iter_mut().rev().find(|s| **s > 0) {
        *last += 1;
    }

    Ok(SymbolPair {
        reference: rs.iter().collect(),
        test: xs.iter().collect(),
        test_spans,
        joint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_overlapping_occurrences() {
        let idx = FrequencyIndex::new("abababa");
        assert_eq!(idx.count("aba"), 3);
        assert_eq!(idx.count("b"), 3);
        assert_eq!(idx.count("abc"), 0);
        assert_eq!(idx.count(""), 7);
        assert_eq!(idx.windows(3), 5);
        assert_eq!(FrequencyIndex::new("ab").windows(3), 0);
    }

    #[test]
    fn expected_frequency_examples() {
        let r = FrequencyIndex::new("abab");
        assert_eq!(expected_frequency(&r, "ab", 3).unwrap(), 2.0);
        assert_eq!(expected_frequency(&r, "cd", 3).unwrap(), 0.0);
        assert_eq!(expected_frequency(&r, "c", 3).unwrap(), 0.0);
        // "aa" is unseen: f(a) f(a) / |R| = 2 * 2 / 4, scaled by 3/3.
        assert_eq!(expected_frequency(&r, "aa", 3).unwrap(), 1.0);
        assert!(expected_frequency(&r, "", 3).is_err());
    }

    #[test]
    fn adapted_score_examples() {
        assert!((adapted_score(3.0, 4.2) + 1.2 / 4.2).abs() < 1e-15);
        assert_eq!(adapted_score(1.0, 0.0), 1.0);
        assert_eq!(adapted_score(2.5, 2.5), 0.0);
        assert_eq!(adapted_score(0.0, 0.0), 0.0);
    }

    #[test]
    fn identical_strings_score_zero() {
        let s = "abcabcaabbcc";
        let scores = tarzan_scores(s, s, 3, &[2; 12]).unwrap();
        assert!(scores.window_scores.iter().all(|&x| x == 0.0));
        assert_eq!(scores.sample_scores.len(), 24);
        assert!(scores.exceedances(0.1).is_empty());
    }

    #[test]
    fn small_hand_example() {
        let scores = tarzan_scores("abab", "aaab", 2, &[1; 4]).unwrap();
        // windows: aa, aa, ab
        assert_eq!(scores.window_scores[2], -0.5);
        assert_eq!(scores.window_scores[0], 0.5);
        assert_eq!(scores.window_scores[1], 0.5);
    }

    #[test]
    fn projection_and_intervals() {
        let scores = tarzan_scores("aaaa", "aaba", 2, &[1, 2, 3, 1]).unwrap();
        assert_eq!(scores.sample_scores.len(), 7);
        // "aa" is under-represented; "ab" and "ba" are unseen in the reference.
        assert!((scores.window_scores[0] + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(scores.window_scores[1..], [1.0, 1.0]);
        assert_eq!(scores.exceedances(0.7), vec![(1, 7)]);
        assert_eq!(scores.exceedances(0.5), vec![(0, 7)]);
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(tarzan_scores("ab", "ab", 0, &[1, 1]).is_err());
        assert!(tarzan_scores("ab", "ab", 3, &[1, 1]).is_err());
        assert!(tarzan_scores("ab", "ab", 1, &[1]).is_err());
    }
}
