use std::collections::{BTreeMap, HashMap};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::AcuteError;
use crate::augment::{Augmentation, AugmentedDialogue};
use crate::corpus::Dialogue;
use crate::generation::ChitChatCandidate;
use crate::metrics::FrequencyInterval;

/// Good candidates per system turn index, best-ranked first.
pub type GoodByTurn = BTreeMap<usize, Vec<ChitChatCandidate>>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleCriteria {
    /// Minimum number of turns, both speakers counted.
    pub min_turns: usize,
    /// Share of system turns with a good candidate must exceed this.
    pub min_good_coverage: f64,
}

impl Default for SampleCriteria {
    fn default() -> Self {
        Self { min_turns: 8, min_good_coverage: 0.4 }
    }
}

fn augmentable_turns(dialogue: &Dialogue, good: &GoodByTurn) -> Vec<usize> {
    dialogue
        .system_turns()
        .filter(|t| good.get(&t.index).is_some_and(|c| !c.is_empty()))
        .map(|t| t.index)
        .collect()
}

pub fn qualifies(dialogue: &Dialogue, good: Option<&GoodByTurn>, criteria: &SampleCriteria) -> bool {
    let system = dialogue.num_system_turns();
    if dialogue.turns.len() < criteria.min_turns || system == 0 {
        return false;
    }
    let augmentable = good.map_or(0, |g| augmentable_turns(dialogue, g).len());
    augmentable as f64 / system as f64 > criteria.min_good_coverage
}

/// Uniformly sample `n` qualifying dialogues, returned in corpus order.
pub fn sample_eval_dialogues(
    dialogues: &[Dialogue],
    good: &HashMap<String, GoodByTurn>,
    n: usize,
    criteria: &SampleCriteria,
    seed: u64,
) -> Result<Vec<Dialogue>, AcuteError> {
    let pool: Vec<&Dialogue> = dialogues.iter().filter(|d| qualifies(d, good.get(&d.id), criteria)).collect();
    if pool.len() < n {
        return Err(AcuteError::InsufficientData { available: pool.len(), requested: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, pool.len(), n).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| pool[i].clone()).collect())
}

/// Attach the best good candidate to a seeded subset of augmentable turns so
/// the injection frequency lands in `interval`.
///
/// The full interval augments every augmentable turn. The others use the
/// largest count that fits.
pub fn make_frequency_variant(
    dialogue: &Dialogue,
    good: &GoodByTurn,
    interval: FrequencyInterval,
    seed: u64,
) -> Result<AugmentedDialogue, AcuteError> {
    let total = dialogue.num_system_turns();
    let candidates = augmentable_turns(dialogue, good);
    let infeasible = || AcuteError::Infeasible {
        dialogue_id: dialogue.id.clone(),
        interval: interval.to_string(),
        augmentable: candidates.len(),
        total,
    };
    let count = match interval {
        FrequencyInterval::Full => Some(candidates.len()).filter(|&m| interval.contains_ratio(m, total)),
        _ => (0..=candidates.len()).rev().find(|&m| interval.contains_ratio(m, total)),
    }
    .ok_or_else(infeasible)?;

    let chosen: Vec<usize> = if count == candidates.len() {
        candidates.clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        index::sample(&mut rng, candidates.len(), count).into_iter().map(|i| candidates[i]).collect()
    };
    let mut out = AugmentedDialogue::new(dialogue.clone());
    for turn in chosen {
        out.augmentations.insert(turn, Augmentation::from(&good[&turn][0]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Speaker, Turn};
    use crate::generation::{CandidateSource, Position};

    fn dialogue(id: &str, system_turns: usize) -> Dialogue {
        let mut turns = Vec::new();
        for i in 0..system_turns {
            turns.push(Turn::new(2 * i, Speaker::User, format!("u{i}")));
            turns.push(Turn::new(2 * i + 1, Speaker::System, format!("s{i}")));
        }
        Dialogue { id: id.into(), services: vec![], turns }
    }

    fn good(d: &Dialogue, augmentable: usize) -> GoodByTurn {
        d.system_turns()
            .take(augmentable)
            .map(|t| {
                let c = ChitChatCandidate {
                    id: format!("{}-{}", d.id, t.index),
                    dialogue_id: d.id.clone(),
                    turn_index: t.index,
                    text: "Sounds fun!".into(),
                    position: Position::Append,
                    source: CandidateSource { backend: "b".into(), params: "p".into() },
                    parent_id: None,
                };
                (t.index, vec![c])
            })
            .collect()
    }

    #[test]
    fn six_turns_excluded() {
        let d = dialogue("d", 3);
        assert!(!qualifies(&d, Some(&good(&d, 3)), &SampleCriteria::default()));
    }

    #[test]
    fn coverage_is_strict() {
        let d = dialogue("d", 10);
        assert!(!qualifies(&d, Some(&good(&d, 3)), &SampleCriteria::default()));
        assert!(!qualifies(&d, Some(&good(&d, 4)), &SampleCriteria::default()));
        assert!(qualifies(&d, Some(&good(&d, 5)), &SampleCriteria::default()));
    }

    #[test]
    fn sampling_is_seeded() {
        let ds: Vec<Dialogue> = (0..20).map(|i| dialogue(&format!("d{i}"), 5)).collect();
        let g: HashMap<String, GoodByTurn> = ds.iter().map(|d| (d.id.clone(), good(d, 5))).collect();
        let a = sample_eval_dialogues(&ds, &g, 5, &SampleCriteria::default(), 7).unwrap();
        let b = sample_eval_dialogues(&ds, &g, 5, &SampleCriteria::default(), 7).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        assert_eq!(
            sample_eval_dialogues(&ds, &g, 21, &SampleCriteria::default(), 7).unwrap_err(),
            AcuteError::InsufficientData { available: 20, requested: 21 }
        );
    }

    #[test]
    fn variant_counts() {
        let d = dialogue("d", 10);
        let g = good(&d, 6);
        let v = make_frequency_variant(&d, &g, FrequencyInterval::Mid, 1).unwrap();
        assert_eq!(v.augmented_system_turns(), 3);
        let full = make_frequency_variant(&d, &g, FrequencyInterval::Full, 1).unwrap();
        assert_eq!(full.injection_frequency::<f64>(), Some(0.6));
        let sparse = good(&d, 2);
        assert!(matches!(
            make_frequency_variant(&d, &sparse, FrequencyInterval::High, 1),
            Err(AcuteError::Infeasible { .. })
        ));
    }
}
