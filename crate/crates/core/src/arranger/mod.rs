//! Combining a task response with a chit-chat add-on at inference time.
//!
//! A choice scorer picks one of three arrangements (chit-chat first, task
//! first, task only) and a per-dialogue gate caps how often chit-chat is
//! let through. Belief states and actions never enter this module.

mod scorer;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::LabeledCandidate;
use crate::augment::attach;
use crate::backend::{BackendError, ContextTurn};
use crate::corpus::{CorpusError, Dialogue};
use crate::generation::Position;
use crate::scalar::Field;

pub use scorer::{ChoiceRequest, ChoiceResponse, ChoiceScorer, HeuristicChoiceScorer, HttpChoiceScorer, TableChoiceScorer, UniformChoiceScorer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Choice {
    ChitchatFirst,
    TaskFirst,
    TaskOnly,
}

impl Choice {
    /// Fixed order, also the tie-break order.
    pub const ALL: [Choice; 3] = [Choice::ChitchatFirst, Choice::TaskFirst, Choice::TaskOnly];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub choice: Choice,
    pub text: String,
}

#[derive(Debug, Error, PartialEq)]
pub enum ArrangerError {
    #[error("task response must not be empty")]
    EmptyTaskResponse,
    #[error("frequency threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
    #[error("choice scorer returned {0:?}; expected three non-negative probabilities summing to 1")]
    Protocol(Vec<f64>),
    #[error("choice scorer failed: {0}")]
    Scorer(BackendError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// The three candidate responses in fixed order.
pub fn make_arrangements(task_response: &str, chitchat: &str) -> Result<[Arrangement; 3], ArrangerError> {
    if task_response.trim().is_empty() {
        return Err(ArrangerError::EmptyTaskResponse);
    }
    Ok([
        Arrangement { choice: Choice::ChitchatFirst, text: attach(task_response, chitchat, Position::Prepend) },
        Arrangement { choice: Choice::TaskFirst, text: attach(task_response, chitchat, Position::Append) },
        Arrangement { choice: Choice::TaskOnly, text: task_response.to_string() },
    ])
}

/// Supervision for the choice scorer derived from one labeled candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingInstance {
    pub dialogue_id: String,
    pub turn_index: usize,
    pub candidate_id: String,
    pub history: Vec<ContextTurn>,
    pub task_response: String,
    pub chitchat: String,
    pub arrangements: [String; 3],
    pub target: Choice,
}

/// Target for a labeled candidate: good ones keep their position, bad ones
/// collapse to the task response alone.
pub fn target_choice(candidate: &LabeledCandidate) -> Choice {
    match (candidate.is_good(), candidate.candidate.position) {
        (true, Position::Prepend) => Choice::ChitchatFirst,
        (true, Position::Append) => Choice::TaskFirst,
        (false, _) => Choice::TaskOnly,
    }
}

/// One instance per labeled candidate, using the ground-truth task response.
pub fn build_training_instances(
    dialogue: &Dialogue,
    labeled: &[LabeledCandidate],
) -> Result<Vec<TrainingInstance>, ArrangerError> {
    let mut by_turn: BTreeMap<usize, Vec<&LabeledCandidate>> = BTreeMap::new();
    for l in labeled.iter().filter(|l| l.candidate.dialogue_id == dialogue.id) {
        by_turn.entry(l.candidate.turn_index).or_default().push(l);
    }
    let mut out = Vec::new();
    for turn in dialogue.system_turns() {
        let Some(cands) = by_turn.get(&turn.index) else { continue };
        let history: Vec<ContextTurn> = dialogue.turns[..turn.index]
            .iter()
            .map(|t| ContextTurn::new(t.speaker, t.utterance.clone()))
            .collect();
        let task = turn.delexicalized()?;
        for c in cands {
            let arrangements = make_arrangements(&task, &c.candidate.text)?.map(|a| a.text);
            out.push(TrainingInstance {
                dialogue_id: dialogue.id.clone(),
                turn_index: turn.index,
                candidate_id: c.candidate.id.clone(),
                history: history.clone(),
                task_response: task.clone(),
                chitchat: c.candidate.text.clone(),
                arrangements,
                target: target_choice(c),
            });
        }
    }
    Ok(out)
}

/// Highest-probability arrangement; ties go to the earlier one.
pub fn choose(
    history: &[ContextTurn],
    task_response: &str,
    chitchat: &str,
    scorer: &dyn ChoiceScorer,
) -> Result<Arrangement, ArrangerError> {
    let arrangements = make_arrangements(task_response, chitchat)?;
    let request = ChoiceRequest { history: history.to_vec(), arrangements: arrangements.clone().map(|a| a.text) };
    let probs = scorer.probs(&request).map_err(ArrangerError::Scorer)?;
    let valid = probs.len() == 3
        && probs.iter().all(|p| p.is_finite() && *p >= 0.0)
        && (probs.iter().sum::<f64>() - 1.0).abs() <= 1e-6;
    if !valid {
        return Err(ArrangerError::Protocol(probs));
    }
    let mut best = 0;
    for i in 1..3 {
        if probs[i] > probs[best] {
            best = i;
        }
    }
    let [a, b, c] = arrangements;
    Ok([a, b, c].into_iter().nth(best).expect("three arrangements"))
}

/// Running counts for one dialogue. `system_turns_so_far` includes the turn
/// being decided.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyState {
    pub system_turns_so_far: usize,
    pub augmented_turns_so_far: usize,
}

impl FrequencyState {
    pub fn frequency<T: Field>(&self) -> T {
        if self.system_turns_so_far == 0 {
            T::zero()
        } else {
            T::ratio(self.augmented_turns_so_far, self.system_turns_so_far)
        }
    }
}

fn check_threshold(threshold: f64) -> Result<(), ArrangerError> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(ArrangerError::InvalidThreshold(threshold))
    }
}

/// Let chit-chat through only while the frequency so far is strictly below
/// `threshold`; otherwise fall back to the task response alone. Updates the
/// augmented count.
pub fn frequency_gate(
    state: &mut FrequencyState,
    threshold: f64,
    proposed: Arrangement,
    task_response: &str,
) -> Result<Arrangement, ArrangerError> {
    check_threshold(threshold)?;
    if proposed.choice == Choice::TaskOnly {
        return Ok(proposed);
    }
    let allowed = state.frequency::<f64>() < threshold;
    if allowed {
        state.augmented_turns_so_far += 1;
        Ok(proposed)
    } else {
        Ok(Arrangement { choice: Choice::TaskOnly, text: task_response.to_string() })
    }
}

/// Outcome of one gated decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GatedChoice {
    pub arrangement: Arrangement,
    /// What the scorer wanted before gating, when it was consulted.
    pub proposed: Option<Choice>,
}

/// Per-dialogue driver: choose, then gate.
pub struct GatedArranger<'a> {
    scorer: &'a dyn ChoiceScorer,
    threshold: Option<f64>,
    /// Count every system turn in the denominator, or only turns offering chit-chat.
    count_all_turns: bool,
    state: FrequencyState,
}

impl<'a> GatedArranger<'a> {
    /// `threshold = None` disables the gate.
    pub fn new(scorer: &'a dyn ChoiceScorer, threshold: Option<f64>) -> Result<Self, ArrangerError> {
        if let Some(t) = threshold {
            check_threshold(t)?;
        }
        Ok(Self { scorer, threshold, count_all_turns: true, state: FrequencyState::default() })
    }

    pub fn count_only_candidate_turns(mut self) -> Self {
        self.count_all_turns = false;
        self
    }

    pub fn state(&self) -> FrequencyState {
        self.state
    }

    pub fn step(
        &mut self,
        history: &[ContextTurn],
        task_response: &str,
        chitchat: Option<&str>,
    ) -> Result<GatedChoice, ArrangerError> {
        let chitchat = chitchat.filter(|c| !c.trim().is_empty());
        if self.count_all_turns || chitchat.is_some() {
            self.state.system_turns_so_far += 1;
        }
        let Some(chitchat) = chitchat else {
            let [_, _, only] = make_arrangements(task_response, "")?;
            return Ok(GatedChoice { arrangement: only, proposed: None });
        };
        let proposed = choose(history, task_response, chitchat, self.scorer)?;
        let choice = proposed.choice;
        let arrangement = match self.threshold {
            Some(t) => frequency_gate(&mut self.state, t, proposed, task_response)?,
            None => {
                if choice != Choice::TaskOnly {
                    self.state.augmented_turns_so_far += 1;
                }
                proposed
            }
        };
        Ok(GatedChoice { arrangement, proposed: Some(choice) })
    }
}
