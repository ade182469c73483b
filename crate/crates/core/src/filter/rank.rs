use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::patterns::PatternSet;
use super::scorer::{CandidateScorer, ScoreRequest};
use super::similarity;
use crate::backend::{BackendError, ContextTurn};
use crate::corpus::Dialogue;
use crate::generation::{CandidatePool, ChitChatCandidate};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankConfig<T> {
    pub k: usize,
    pub weight_frequency: T,
    pub weight_diversity: T,
    pub weight_response: T,
    /// Keep `k` per system turn instead of `k` per dialogue.
    pub per_turn: bool,
}

impl<T: Field> Default for RankConfig<T> {
    fn default() -> Self {
        Self::with_weights(10, 0.3, 0.3, 0.2)
    }
}

impl<T: Field> RankConfig<T> {
    pub fn with_weights(k: usize, frequency: f64, diversity: f64, response: f64) -> Self {
        let w = |x: f64| T::from_f64(x).expect("weight representable");
        Self {
            k,
            weight_frequency: w(frequency),
            weight_diversity: w(diversity),
            weight_response: w(response),
            per_turn: false,
        }
    }

    /// All diversity/frequency/response weights zero: rank by posterior alone.
    pub fn posterior_only(k: usize) -> Self {
        Self { k, weight_frequency: T::zero(), weight_diversity: T::zero(), weight_response: T::zero(), per_turn: false }
    }
}

/// A candidate with the set-independent ranking signals filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate<T> {
    pub candidate: ChitChatCandidate,
    pub posterior: T,
    pub freq_norm: T,
    pub sim_to_response: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedCandidate<T> {
    pub candidate: ChitChatCandidate,
    pub posterior: T,
    pub bad_pattern_hits: Vec<String>,
    pub freq_norm: T,
    /// Highest similarity to any candidate selected before this one.
    pub max_sim_to_kept: T,
    pub sim_to_response: T,
    pub final_score: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankOutcome<T> {
    pub selected: Vec<RankedCandidate<T>>,
    /// Candidates dropped by bad-pattern rules, with the rules they hit.
    pub excluded: Vec<(ChitChatCandidate, Vec<String>)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum FilterError {
    #[error("scorer unreachable: {0}")]
    Transport(BackendError),
    #[error("scorer error: {0}")]
    Scorer(BackendError),
    #[error("scorer returned posterior {value} for candidate {candidate_id}; expected a value in [0, 1]")]
    Protocol { candidate_id: String, value: f64 },
    #[error("candidate {candidate_id} refers to turn {turn_index}, which is not a system turn of dialogue {dialogue_id}")]
    UnknownTurn { candidate_id: String, dialogue_id: String, turn_index: usize },
    #[error("pool belongs to dialogue {pool} but dialogue {dialogue} was supplied")]
    DialogueMismatch { pool: String, dialogue: String },
}

/// `posterior - wf*freq_norm - wc*max_sim_to_kept - wr*sim_to_response`.
pub fn final_score<T: Field>(item: &ScoredCandidate<T>, max_sim_to_kept: T, config: &RankConfig<T>) -> T {
    item.posterior
        - config.weight_frequency * item.freq_norm
        - config.weight_diversity * max_sim_to_kept
        - config.weight_response * item.sim_to_response
}

/// Deterministic tie-break: earlier turn, prepend before append, then text.
pub fn tie_order(a: &ChitChatCandidate, b: &ChitChatCandidate) -> Ordering {
    a.order_key().cmp(&b.order_key()).then_with(|| a.id.cmp(&b.id))
}

/// Greedy selection; at each step the remaining candidate with the highest
/// final score (given the already selected set) is kept.
pub fn select_greedy<T: Field>(items: &[ScoredCandidate<T>], config: &RankConfig<T>) -> Vec<RankedCandidate<T>> {
    let mut remaining: Vec<usize> = (0..items.len()).collect();
    let mut max_sim: Vec<T> = vec![T::zero(); items.len()];
    let mut out: Vec<RankedCandidate<T>> = Vec::new();

    while out.len() < config.k && !remaining.is_empty() {
        let mut best: Option<(usize, T)> = None;
        for (slot, &i) in remaining.iter().enumerate() {
            let score = final_score(&items[i], max_sim[i], config);
            let better = match best {
                None => true,
                Some((b, best_score)) => {
                    score > best_score
                        || (score == best_score
                            && tie_order(&items[i].candidate, &items[remaining[b]].candidate) == Ordering::Less)
                }
            };
            if better {
                best = Some((slot, score));
            }
        }
        let (slot, score) = best.expect("remaining is non-empty");
        let chosen = remaining.remove(slot);
        let item = &items[chosen];
        out.push(RankedCandidate {
            candidate: item.candidate.clone(),
            posterior: item.posterior,
            bad_pattern_hits: Vec::new(),
            freq_norm: item.freq_norm,
            max_sim_to_kept: max_sim[chosen],
            sim_to_response: item.sim_to_response,
            final_score: score,
        });
        for &i in &remaining {
            let s: T = similarity(&items[i].candidate.text, &item.candidate.text);
            if s > max_sim[i] {
                max_sim[i] = s;
            }
        }
    }
    out
}

/// Drop bad-pattern matches, score survivors and keep the top `k`.
pub fn rank_pool<T: Field>(
    dialogue: &Dialogue,
    pool: &CandidatePool,
    scorer: &dyn CandidateScorer,
    patterns: &PatternSet,
    config: &RankConfig<T>,
) -> Result<RankOutcome<T>, FilterError> {
    if pool.dialogue_id != dialogue.id {
        return Err(FilterError::DialogueMismatch { pool: pool.dialogue_id.clone(), dialogue: dialogue.id.clone() });
    }
    let mut excluded = Vec::new();
    let mut scored = Vec::new();
    for c in &pool.candidates {
        let hits = patterns.match_bad_patterns(&c.text);
        if !hits.is_empty() {
            excluded.push((c.clone(), hits));
            continue;
        }
        let system_turn = dialogue
            .turns
            .get(c.turn_index)
            .filter(|t| t.speaker == crate::corpus::Speaker::System)
            .ok_or_else(|| FilterError::UnknownTurn {
                candidate_id: c.id.clone(),
                dialogue_id: dialogue.id.clone(),
                turn_index: c.turn_index,
            })?;
        let context: Vec<ContextTurn> = dialogue.turns[..=c.turn_index]
            .iter()
            .map(|t| ContextTurn::new(t.speaker, t.utterance.clone()))
            .collect();
        let request = ScoreRequest { context, candidate: c.text.clone(), position: c.position };
        let posterior = scorer.posterior(&request).map_err(|e| match e {
            BackendError::Transport(_) => FilterError::Transport(e),
            other => FilterError::Scorer(other),
        })?;
        if !(0.0..=1.0).contains(&posterior) {
            return Err(FilterError::Protocol { candidate_id: c.id.clone(), value: posterior });
        }
        let freq_norm = if pool.run_max_count == 0 {
            T::zero()
        } else {
            T::from_u32(pool.count_of(&c.text)).expect("count") / T::from_u32(pool.run_max_count).expect("count")
        };
        scored.push(ScoredCandidate {
            candidate: c.clone(),
            posterior: T::from_f64(posterior).expect("posterior representable"),
            freq_norm,
            sim_to_response: similarity(&c.text, &system_turn.utterance),
        });
    }
    // canonical input order makes the result independent of pool order
    scored.sort_by(|a, b| tie_order(&a.candidate, &b.candidate));

    let selected = if config.per_turn {
        let mut by_turn: BTreeMap<usize, Vec<ScoredCandidate<T>>> = BTreeMap::new();
        for s in scored {
            by_turn.entry(s.candidate.turn_index).or_default().push(s);
        }
        by_turn.values().flat_map(|items| select_greedy(items, config)).collect()
    } else {
        select_greedy(&scored, config)
    };
    Ok(RankOutcome { selected, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::{CandidateSource, Position};

    fn cand(turn: usize, pos: Position, text: &str) -> ChitChatCandidate {
        ChitChatCandidate {
            id: ChitChatCandidate::make_id("d", turn, pos, text),
            dialogue_id: "d".into(),
            turn_index: turn,
            text: text.into(),
            position: pos,
            source: CandidateSource { backend: "b".into(), params: "p".into() },
            parent_id: None,
        }
    }

    fn item(text: &str, posterior: f64, freq: f64) -> ScoredCandidate<f64> {
        ScoredCandidate { candidate: cand(1, Position::Append, text), posterior, freq_norm: freq, sim_to_response: 0.0 }
    }

    #[test]
    fn zero_weights_is_top_k_by_posterior() {
        let items: Vec<_> = (0..12).map(|i| item(&format!("text number {i}"), i as f64 / 20.0, 0.0)).collect();
        let out = select_greedy(&items, &RankConfig::posterior_only(10));
        assert_eq!(out.len(), 10);
        let got: Vec<f64> = out.iter().map(|r| r.posterior).collect();
        let want: Vec<f64> = (2..12).rev().map(|i| i as f64 / 20.0).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn small_pool_returns_everything() {
        let items = vec![item("a b", 0.5, 0.0), item("c d", 0.4, 0.0), item("e f", 0.3, 0.0)];
        assert_eq!(select_greedy(&items, &RankConfig::default()).len(), 3);
    }

    #[test]
    fn diversity_penalty_demotes_near_duplicates() {
        let items = vec![
            item("I love penguins", 0.9, 0.0),
            item("I love penguins so much", 0.85, 0.0),
            item("Enjoy the show", 0.8, 0.0),
        ];
        let config = RankConfig::with_weights(3, 0.0, 0.5, 0.0);
        let out = select_greedy(&items, &config);
        let texts: Vec<&str> = out.iter().map(|r| r.candidate.text.as_str()).collect();
        assert_eq!(texts, vec!["I love penguins", "Enjoy the show", "I love penguins so much"]);
        assert!((out[2].max_sim_to_kept - 0.6).abs() < 1e-12);
    }

    #[test]
    fn ties_prefer_earlier_turn_then_prepend() {
        let mk = |turn, pos, text: &str| ScoredCandidate {
            candidate: cand(turn, pos, text),
            posterior: 0.5,
            freq_norm: 0.0,
            sim_to_response: 0.0,
        };
        let items = vec![mk(3, Position::Prepend, "x"), mk(1, Position::Append, "y"), mk(1, Position::Prepend, "z")];
        let out = select_greedy(&items, &RankConfig::posterior_only(3));
        let texts: Vec<&str> = out.iter().map(|r| r.candidate.text.as_str()).collect();
        assert_eq!(texts, vec!["z", "y", "x"]);
    }

    #[test]
    fn exact_rational_scores() {
        use num_rational::Ratio;
        let items: Vec<ScoredCandidate<Ratio<i64>>> = vec![ScoredCandidate {
            candidate: cand(1, Position::Append, "a"),
            posterior: Ratio::new(1, 2),
            freq_norm: Ratio::new(1, 3),
            sim_to_response: Ratio::new(1, 4),
        }];
        let config = RankConfig::<Ratio<i64>>::with_weights(10, 0.5, 0.5, 0.5);
        let out = select_greedy(&items, &config);
        // 1/2 - 1/6 - 0 - 1/8
        assert_eq!(out[0].final_score, Ratio::new(5, 24));
    }
}
