//! Hybrid candidate filter: bad-pattern rules, a classifier posterior, and a
//! greedy ranker that penalizes run-level frequency, similarity to already
//! kept candidates, and similarity to the system response being augmented.

mod patterns;
mod rank;
mod scorer;

use std::collections::BTreeSet;

use crate::scalar::Field;
use crate::text::content_tokens;

pub use patterns::{match_bad_patterns, BadPattern, PatternError, PatternKind, PatternSet, DEFAULT_RULES};
pub use rank::{
    final_score, rank_pool, select_greedy, tie_order, FilterError, RankConfig, RankOutcome, RankedCandidate,
    ScoredCandidate,
};
pub use scorer::{CandidateScorer, HeuristicScorer, HttpScorer, ScoreRequest, ScoreResponse, TableScorer};

/// Token-set Jaccard similarity over case-folded, punctuation-stripped tokens.
/// Two texts with no tokens at all have similarity 0.
pub fn similarity<T: Field>(a: &str, b: &str) -> T {
    let a: BTreeSet<String> = content_tokens(a).into_iter().collect();
    let b: BTreeSet<String> = content_tokens(b).into_iter().collect();
    let union = a.union(&b).count();
    if union == 0 {
        return T::zero();
    }
    T::ratio(a.intersection(&b).count(), union)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn identical_token_sets() {
        assert_eq!(similarity::<f64>("I love penguins.", "I love penguins"), 1.0);
    }

    #[test]
    fn disjoint() {
        assert_eq!(similarity::<f64>("hello there", "goodbye now"), 0.0);
    }

    #[test]
    fn half_overlap_is_exact() {
        assert_eq!(similarity::<Ratio<i64>>("I love penguins", "I love pandas"), Ratio::new(1, 2));
    }

    #[test]
    fn empty_after_normalization() {
        assert_eq!(similarity::<f64>("...", "!!"), 0.0);
        assert_eq!(similarity::<f64>("", "word"), 0.0);
    }
}
