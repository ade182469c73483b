use std::collections::HashMap;

use super::MetricsError;
use crate::scalar::Real;
use crate::text::tokenize;

const MAX_ORDER: usize = 4;

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Corpus-level BLEU-4 on a 0 to 100 scale.
///
/// Uniform weights over orders 1 to 4 with clipped counts and the usual
/// brevity penalty. When any of orders 2 to 4 has no match, those three
/// orders are add-one smoothed; zero unigram matches score 0.
pub fn bleu4<T: Real, S: AsRef<str>>(hypotheses: &[S], references: &[S]) -> Result<T, MetricsError> {
    if hypotheses.is_empty() {
        return Err(MetricsError::EmptyHypotheses);
    }
    if hypotheses.len() != references.len() {
        return Err(MetricsError::LengthMismatch { pred: hypotheses.len(), gold: references.len() });
    }
    let mut matches = [0usize; MAX_ORDER];
    let mut totals = [0usize; MAX_ORDER];
    let (mut hyp_len, mut ref_len) = (0usize, 0usize);
    for (h, r) in hypotheses.iter().zip(references) {
        let h = tokenize(h.as_ref());
        let r = tokenize(r.as_ref());
        hyp_len += h.len();
        ref_len += r.len();
        for n in 1..=MAX_ORDER {
            let ref_counts = ngram_counts(&r, n);
            for (gram, count) in ngram_counts(&h, n) {
                matches[n - 1] += count.min(ref_counts.get(gram).copied().unwrap_or(0));
            }
            totals[n - 1] += h.len().saturating_sub(n - 1);
        }
    }
    if hyp_len == 0 || matches[0] == 0 {
        return Ok(T::zero());
    }
    let smooth = matches[1..].iter().any(|&m| m == 0);
    let mut log_sum = T::ratio(matches[0], totals[0]).ln();
    for n in 1..MAX_ORDER {
        let p = if smooth { T::ratio(matches[n] + 1, totals[n] + 1) } else { T::ratio(matches[n], totals[n]) };
        log_sum = log_sum + p.ln();
    }
    let brevity = if hyp_len < ref_len { (T::one() - T::ratio(ref_len, hyp_len)).exp() } else { T::one() };
    Ok(T::lit(100.0) * brevity * (log_sum / T::from_count(MAX_ORDER)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_hundred() {
        let x = ["The cost is $12.", "Enjoy your ride!"];
        let s: f64 = bleu4(&x, &x).unwrap();
        assert!((s - 100.0).abs() < 1e-9);
    }

    #[test]
    fn empty_hypotheses() {
        assert_eq!(bleu4::<f64, &str>(&[], &[]).unwrap_err(), MetricsError::EmptyHypotheses);
        assert_eq!(bleu4::<f64, _>(&["", ""], &["a b", "c"]).unwrap(), 0.0);
    }

    #[test]
    fn short_hypothesis_hand_worked() {
        // unigram 3/3; orders 2-4 smoothed because no 4-gram exists:
        // 3/3, 2/2, 1/1. Only the brevity penalty remains.
        let s: f64 = bleu4(&["the cat sat"], &["the cat sat down"]).unwrap();
        let expected = 100.0 * (1.0f64 - 4.0 / 3.0).exp();
        assert!((s - expected).abs() < 1e-9, "{s} vs {expected}");
    }

    #[test]
    fn no_unigram_match_is_zero() {
        assert_eq!(bleu4::<f32, _>(&["xyz"], &["abc"]).unwrap(), 0.0);
    }
}
