//! Fleiss' kappa for a fixed number of raters per item.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::record::Label;
use crate::scalar::Field;

#[derive(Debug, Error, PartialEq)]
pub enum KappaError {
    #[error("no items with at least {raters} ratings ({excluded} excluded)")]
    NoItems { raters: usize, excluded: usize },
    #[error("fleiss' kappa needs at least 2 ratings per item, got {0}")]
    TooFewRaters(usize),
    #[error("item {item} has {got} ratings, expected {expected}")]
    Ragged { item: usize, got: usize, expected: usize },
    #[error("expected agreement is 1 but observed agreement is not; kappa is undefined")]
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport<T> {
    pub kappa: T,
    /// Mean per-item agreement.
    pub observed_agreement: T,
    /// Agreement expected from the pooled category proportions.
    pub expected_agreement: T,
    pub raters_per_item: usize,
    pub items: usize,
    /// Items left out for having fewer than `raters_per_item` ratings.
    pub excluded: Vec<String>,
}

/// Kappa from an item × category count table whose rows all sum to the same
/// number of raters `n >= 2`.
///
/// Returns `(kappa, observed_agreement, expected_agreement)`.
pub fn fleiss_kappa_counts<T: Field>(counts: &[Vec<usize>]) -> Result<(T, T, T), KappaError> {
    let Some(first) = counts.first() else {
        return Err(KappaError::NoItems { raters: 0, excluded: 0 });
    };
    let n: usize = first.iter().sum();
    if n < 2 {
        return Err(KappaError::TooFewRaters(n));
    }
    let categories = counts.iter().map(Vec::len).max().unwrap_or(0);
    let mut column_totals = vec![0usize; categories];
    let mut agreement_sum = T::zero();
    for (item, row) in counts.iter().enumerate() {
        let got: usize = row.iter().sum();
        if got != n {
            return Err(KappaError::Ragged { item, got, expected: n });
        }
        let pairs: usize = row.iter().map(|&c| c * c).sum::<usize>() - n;
        agreement_sum = agreement_sum + T::ratio(pairs, n * (n - 1));
        for (j, &c) in row.iter().enumerate() {
            column_totals[j] += c;
        }
    }
    let items = T::from_count(counts.len());
    let observed = agreement_sum / items;
    let total_ratings = counts.len() * n;
    let expected = column_totals
        .iter()
        .map(|&c| T::ratio(c, total_ratings))
        .fold(T::zero(), |acc, p| acc + p * p);

    if expected == T::one() {
        return if observed == T::one() { Ok((T::one(), observed, expected)) } else { Err(KappaError::Undefined) };
    }
    Ok(((observed - expected) / (T::one() - expected), observed, expected))
}

/// Kappa over GOOD/BAD labels grouped by item.
///
/// `raters_per_item` defaults to the largest rating count of any item. Items
/// with fewer ratings are excluded and listed in the report; items with more
/// use their first `raters_per_item` ratings.
pub fn fleiss_kappa<T: Field>(
    ratings: &BTreeMap<String, Vec<Label>>,
    raters_per_item: Option<usize>,
) -> Result<KappaReport<T>, KappaError> {
    let n = raters_per_item.unwrap_or_else(|| ratings.values().map(Vec::len).max().unwrap_or(0));
    if n < 2 {
        return Err(KappaError::TooFewRaters(n));
    }
    let mut excluded = Vec::new();
    let mut table = Vec::new();
    for (item, labels) in ratings {
        if labels.len() < n {
            excluded.push(item.clone());
            continue;
        }
        let good = labels[..n].iter().filter(|&&l| l == Label::Good).count();
        table.push(vec![good, n - good]);
    }
    if table.is_empty() {
        return Err(KappaError::NoItems { raters: n, excluded: excluded.len() });
    }
    let (kappa, observed_agreement, expected_agreement) = fleiss_kappa_counts(&table)?;
    Ok(KappaReport { kappa, observed_agreement, expected_agreement, raters_per_item: n, items: table.len(), excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn perfect_agreement_is_one() {
        let k: (f64, f64, f64) = fleiss_kappa_counts(&[vec![3, 0], vec![0, 3], vec![3, 0]]).unwrap();
        assert_eq!(k.0, 1.0);
    }

    #[test]
    fn two_items_two_raters_is_minus_one_third() {
        // (G,G), (G,B)
        let (k, p, pe): (Q, Q, Q) = fleiss_kappa_counts(&[vec![2, 0], vec![1, 1]]).unwrap();
        assert_eq!(p, Q::new(1, 2));
        assert_eq!(pe, Q::new(5, 8));
        assert_eq!(k, Q::new(-1, 3));
    }

    #[test]
    fn single_category_everywhere() {
        let (k, _, _): (f64, f64, f64) = fleiss_kappa_counts(&[vec![2, 0], vec![2, 0]]).unwrap();
        assert_eq!(k, 1.0);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert_eq!(
            fleiss_kappa_counts::<f64>(&[vec![2, 0], vec![1, 2]]).unwrap_err(),
            KappaError::Ragged { item: 1, got: 3, expected: 2 }
        );
    }

    #[test]
    fn under_rated_items_excluded() {
        use Label::*;
        let ratings = BTreeMap::from([
            ("a".to_string(), vec![Good, Good]),
            ("b".to_string(), vec![Good, Bad]),
            ("c".to_string(), vec![Bad]),
        ]);
        let r: KappaReport<Q> = fleiss_kappa(&ratings, None).unwrap();
        assert_eq!(r.kappa, Q::new(-1, 3));
        assert_eq!(r.excluded, vec!["c".to_string()]);
        assert_eq!(r.items, 2);
    }

    #[test]
    fn everything_excluded() {
        let ratings = BTreeMap::from([("a".to_string(), vec![Label::Good])]);
        assert_eq!(
            fleiss_kappa::<f64>(&ratings, Some(2)).unwrap_err(),
            KappaError::NoItems { raters: 2, excluded: 1 }
        );
    }
}
