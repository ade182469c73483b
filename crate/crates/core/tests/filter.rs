use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::LazyLock;

use chitchat_core::corpus::{Dialogue, Speaker, Turn};
use chitchat_core::filter::{
    final_score, rank_pool, similarity, tie_order, PatternSet, RankConfig, ScoredCandidate, TableScorer,
};
use chitchat_core::generation::{CandidatePool, CandidateSource, ChitChatCandidate, Position};
use chitchat_core::text::normalize;
use chitchat_core::Rational;
use proptest::prelude::*;

static PATTERNS: LazyLock<PatternSet> = LazyLock::new(PatternSet::default);

const WORDS: [&str; 10] = ["great", "choice", "love", "that", "place", "fun", "enjoy", "it", "sounds", "nice"];

fn dialogue() -> Dialogue {
    Dialogue {
        id: "d".into(),
        services: vec![],
        turns: vec![
            Turn::new(0, Speaker::User, "Find me a place to eat."),
            Turn::new(1, Speaker::System, "Which city?"),
            Turn::new(2, Speaker::User, "San Jose."),
            Turn::new(3, Speaker::System, "I found a nice place you will love."),
        ],
    }
}

#[derive(Debug, Clone)]
struct Draft {
    words: Vec<usize>,
    turn: usize,
    prepend: bool,
    posterior: u32,
    count: u32,
    url: bool,
}

fn draft() -> impl Strategy<Value = Draft> {
    (prop::collection::vec(0usize..WORDS.len(), 1..5), prop::bool::ANY, prop::bool::ANY, 0u32..=20, 1u32..5, prop::bool::weighted(0.2))
        .prop_map(|(words, late, prepend, posterior, count, url)| Draft {
            words,
            turn: if late { 3 } else { 1 },
            prepend,
            posterior,
            count,
            url,
        })
}

fn build(drafts: &[Draft]) -> (CandidatePool, TableScorer) {
    let mut candidates = Vec::new();
    let mut frequency = BTreeMap::new();
    let mut scorer = TableScorer::new(0.0);
    for (i, s) in drafts.iter().enumerate() {
        let mut text: Vec<&str> = s.words.iter().map(|&w| WORDS[w]).collect();
        let tag = format!("n{i}");
        text.push(&tag);
        if s.url {
            text.push("www.example.com");
        }
        let text = text.join(" ");
        let position = if s.prepend { Position::Prepend } else { Position::Append };
        candidates.push(ChitChatCandidate {
            id: ChitChatCandidate::make_id("d", s.turn, position, &text),
            dialogue_id: "d".into(),
            turn_index: s.turn,
            text: text.clone(),
            position,
            source: CandidateSource { backend: "b".into(), params: "p".into() },
            parent_id: None,
        });
        frequency.insert(normalize(&text), s.count);
        scorer = scorer.with(&text, s.posterior as f64 / 20.0);
    }
    let run_max_count = frequency.values().copied().max().unwrap_or(0);
    (CandidatePool { dialogue_id: "d".into(), candidates, frequency, run_max_count }, scorer)
}

fn rational_config(k: usize, wf: i64, wc: i64, wr: i64) -> RankConfig<Rational> {
    RankConfig {
        k,
        weight_frequency: Rational::new(wf, 10),
        weight_diversity: Rational::new(wc, 10),
        weight_response: Rational::new(wr, 10),
        per_turn: false,
    }
}

/// Marginal score of each element of `order` given the ones before it.
fn marginal_scores(
    items: &[ScoredCandidate<Rational>],
    sim: &[Vec<Rational>],
    order: &[usize],
    config: &RankConfig<Rational>,
) -> Vec<Rational> {
    order
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let max_sim = order[..pos].iter().map(|&j| sim[i][j]).max().unwrap_or_default();
            final_score(&items[i], max_sim, config)
        })
        .collect()
}

fn sequences(n: usize, len: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for i in 0..n {
        if !prefix.contains(&i) {
            prefix.push(i);
            sequences(n, len, prefix, out);
            prefix.pop();
        }
    }
}

/// Exhaustive search: the ordered selection whose marginal scores are
/// lexicographically largest, ties going to the canonically earlier candidate.
fn brute_force(items: &[ScoredCandidate<Rational>], config: &RankConfig<Rational>) -> Vec<String> {
    let len = config.k.min(items.len());
    let sim: Vec<Vec<Rational>> = items
        .iter()
        .map(|a| items.iter().map(|b| similarity(&a.candidate.text, &b.candidate.text)).collect())
        .collect();
    let mut all = Vec::new();
    sequences(items.len(), len, &mut Vec::new(), &mut all);
    let scored: Vec<(Vec<usize>, Vec<Rational>)> =
        all.into_iter().map(|seq| { let s = marginal_scores(items, &sim, &seq, config); (seq, s) }).collect();
    let better = |(a, sa): &(Vec<usize>, Vec<Rational>), (b, sb): &(Vec<usize>, Vec<Rational>)| -> bool {
        for p in 0..a.len() {
            match sa[p].cmp(&sb[p]) {
                Ordering::Greater => return true,
                Ordering::Less => return false,
                Ordering::Equal if a[p] != b[p] => {
                    return tie_order(&items[a[p]].candidate, &items[b[p]].candidate) == Ordering::Less
                }
                Ordering::Equal => {}
            }
        }
        false
    };
    let mut best = &scored[0];
    for entry in &scored[1..] {
        if better(entry, best) {
            best = entry;
        }
    }
    best.0.iter().map(|&i| items[i].candidate.id.clone()).collect()
}

fn scored_survivors(pool: &CandidatePool, scorer: &TableScorer, d: &Dialogue) -> Vec<ScoredCandidate<Rational>> {
    // k large and all weights zero returns every survivor with its signals
    let all = rank_pool(d, pool, scorer, &PATTERNS, &rational_config(usize::MAX, 0, 0, 0)).unwrap();
    all.selected
        .into_iter()
        .map(|r| ScoredCandidate {
            candidate: r.candidate,
            posterior: r.posterior,
            freq_norm: r.freq_norm,
            sim_to_response: r.sim_to_response,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_matches_exhaustive(
        drafts in prop::collection::vec(draft(), 1..=6),
        k in 1usize..=6,
        wf in 0i64..=5,
        wc in 0i64..=5,
        wr in 0i64..=5,
    ) {
        let d = dialogue();
        let (pool, scorer) = build(&drafts);
        let config = rational_config(k, wf, wc, wr);
        let outcome = rank_pool(&d, &pool, &scorer, &PATTERNS, &config).unwrap();
        let greedy: Vec<String> = outcome.selected.iter().map(|r| r.candidate.id.clone()).collect();
        let items = scored_survivors(&pool, &scorer, &d);
        prop_assert_eq!(greedy, brute_force(&items, &config));
        prop_assert!(outcome.selected.len() <= k);
        prop_assert!(outcome.selected.iter().all(|r| !r.candidate.text.contains("www.")));
        prop_assert_eq!(outcome.excluded.len(), drafts.iter().filter(|s| s.url).count());
    }

    #[test]
    fn zero_weights_rank_by_posterior(drafts in prop::collection::vec(draft(), 1..12), k in 1usize..=10) {
        let d = dialogue();
        let (pool, scorer) = build(&drafts);
        let outcome = rank_pool(&d, &pool, &scorer, &PATTERNS, &rational_config(k, 0, 0, 0)).unwrap();
        let mut items = scored_survivors(&pool, &scorer, &d);
        items.sort_by(|a, b| b.posterior.cmp(&a.posterior).then_with(|| tie_order(&a.candidate, &b.candidate)));
        let expected: Vec<&str> = items.iter().take(k).map(|s| s.candidate.id.as_str()).collect();
        let got: Vec<&str> = outcome.selected.iter().map(|r| r.candidate.id.as_str()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn pool_order_does_not_matter(drafts in prop::collection::vec(draft(), 1..8), k in 1usize..=10) {
        let d = dialogue();
        let (pool, scorer) = build(&drafts);
        let mut reversed = pool.clone();
        reversed.candidates.reverse();
        let config = RankConfig::<f64>::with_weights(k, 0.3, 0.3, 0.2);
        let a = rank_pool(&d, &pool, &scorer, &PATTERNS, &config).unwrap();
        let b = rank_pool(&d, &reversed, &scorer, &PATTERNS, &config).unwrap();
        prop_assert_eq!(a.selected, b.selected);
    }
}

#[test]
fn twelve_candidates_keep_ten() {
    let drafts: Vec<Draft> = (0..12)
        .map(|i| Draft { words: vec![i % WORDS.len()], turn: 3, prepend: i % 2 == 0, posterior: i as u32, count: 1, url: false })
        .collect();
    let (pool, scorer) = build(&drafts);
    let out = rank_pool(&dialogue(), &pool, &scorer, &PATTERNS, &RankConfig::<f64>::default()).unwrap();
    assert_eq!(out.selected.len(), 10);
}
