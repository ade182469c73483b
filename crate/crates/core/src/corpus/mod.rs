//! Task-oriented dialogue corpus model, ingestion and delexicalization.
//!
//! Every source format is normalized into [`Dialogue`]: strictly alternating
//! user/system turns, belief triplets on user turns, action triplets on
//! system turns, and character-offset slot spans for delexicalization.

mod delex;
mod ingest;
mod multiwoz;
mod sgd;
mod synthetic;
mod validate;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use delex::{delexicalize, placeholder};
pub use ingest::{from_canonical_jsonl, ingest_corpus, to_canonical_jsonl, to_sgd_json, CorpusFormat};
pub use synthetic::synthetic_corpus;
pub use validate::{validate_corpus, validate_dialogue, Rule, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Speaker {
    User,
    System,
}

impl Speaker {
    pub fn as_str(self) -> &'static str {
        match self {
            Speaker::User => "user",
            Speaker::System => "system",
        }
    }
}

/// One `(domain, slot, value)` element of a belief state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BeliefTriplet {
    pub domain: String,
    pub slot: String,
    pub value: String,
}

impl BeliefTriplet {
    pub fn new(domain: impl Into<String>, slot: impl Into<String>, value: impl Into<String>) -> Self {
        Self { domain: domain.into(), slot: slot.into(), value: value.into() }
    }
}

/// One `(domain, action_type, slot)` dialogue act. `slot` is empty for slotless acts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionTriplet {
    pub domain: String,
    pub action_type: String,
    pub slot: String,
}

impl ActionTriplet {
    pub fn new(domain: impl Into<String>, action_type: impl Into<String>, slot: impl Into<String>) -> Self {
        Self { domain: domain.into(), action_type: action_type.into(), slot: slot.into() }
    }
}

/// A slot value span, in character (code point) offsets, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlotSpan {
    pub slot: String,
    pub start: usize,
    pub end: usize,
}

impl SlotSpan {
    pub fn new(slot: impl Into<String>, start: usize, end: usize) -> Self {
        Self { slot: slot.into(), start, end }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Frame {
    pub service: String,
    #[serde(default)]
    pub belief: BTreeSet<BeliefTriplet>,
    #[serde(default)]
    pub actions: BTreeSet<ActionTriplet>,
    #[serde(default)]
    pub slot_spans: Vec<SlotSpan>,
}

impl Frame {
    pub fn new(service: impl Into<String>) -> Self {
        Self { service: service.into(), ..Self::default() }
    }

    /// Domain name used in triplets and placeholders.
    pub fn domain(&self) -> String {
        domain_of(&self.service)
    }
}

/// Lowercased service name with any trailing numeric variant suffix removed
/// (`RideSharing_2` becomes `ridesharing`).
pub fn domain_of(service: &str) -> String {
    let lower = service.to_lowercase();
    match lower.rsplit_once('_') {
        Some((head, tail)) if !head.is_empty() && !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) => {
            head.to_string()
        }
        _ => lower,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turn {
    pub index: usize,
    pub speaker: Speaker,
    pub utterance: String,
    #[serde(default)]
    pub frames: Vec<Frame>,
}

impl Turn {
    pub fn new(index: usize, speaker: Speaker, utterance: impl Into<String>) -> Self {
        Self { index, speaker, utterance: utterance.into(), frames: Vec::new() }
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frames.push(frame);
        self
    }

    /// Union of the belief triplets over all frames.
    pub fn belief(&self) -> BTreeSet<BeliefTriplet> {
        self.frames.iter().flat_map(|f| f.belief.iter().cloned()).collect()
    }

    /// Union of the action triplets over all frames.
    pub fn actions(&self) -> BTreeSet<ActionTriplet> {
        self.frames.iter().flat_map(|f| f.actions.iter().cloned()).collect()
    }

    /// Utterance with every annotated slot span replaced by its placeholder.
    pub fn delexicalized(&self) -> Result<String, CorpusError> {
        delexicalize(&self.utterance, &self.frames)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dialogue {
    pub id: String,
    #[serde(default)]
    pub services: Vec<String>,
    pub turns: Vec<Turn>,
}

impl Dialogue {
    /// System turns in order.
    pub fn system_turns(&self) -> impl Iterator<Item = &Turn> {
        self.turns.iter().filter(|t| t.speaker == Speaker::System)
    }

    pub fn num_system_turns(&self) -> usize {
        self.system_turns().count()
    }

    /// The `ordinal`-th system turn, counting from 1.
    pub fn system_turn(&self, ordinal: usize) -> Option<&Turn> {
        ordinal.checked_sub(1).and_then(|i| self.system_turns().nth(i))
    }

    /// The user turn immediately preceding the system turn at `turn_index`.
    pub fn user_turn_before(&self, turn_index: usize) -> Option<&Turn> {
        turn_index
            .checked_sub(1)
            .and_then(|i| self.turns.get(i))
            .filter(|t| t.speaker == Speaker::User)
    }

    /// Services referenced by the dialogue's domains, lowercased to their domain form.
    pub fn domains(&self) -> BTreeSet<String> {
        self.services.iter().map(|s| domain_of(s)).collect()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("validation error in dialogue {}{}: {}", .0.dialogue_id, .0.turn_index.map(|i| format!(" turn {i}")).unwrap_or_default(), .0.rule)]
    Validation(Violation),
    #[error("overlapping slot spans {first:?} and {second:?}")]
    OverlappingSpans { first: (usize, usize), second: (usize, usize) },
    #[error("slot span {start}..{end} outside utterance of {len} characters")]
    SpanOutOfBounds { start: usize, end: usize, len: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_strips_variant_suffix() {
        assert_eq!(domain_of("RideSharing_2"), "ridesharing");
        assert_eq!(domain_of("restaurant"), "restaurant");
        assert_eq!(domain_of("Media_"), "media_");
        assert_eq!(domain_of("_3"), "_3");
    }

    #[test]
    fn system_turn_ordinals_are_one_based() {
        let d = Dialogue {
            id: "d".into(),
            services: vec![],
            turns: vec![
                Turn::new(0, Speaker::User, "a"),
                Turn::new(1, Speaker::System, "b"),
                Turn::new(2, Speaker::User, "c"),
                Turn::new(3, Speaker::System, "d"),
            ],
        };
        assert_eq!(d.system_turn(2).unwrap().utterance, "d");
        assert!(d.system_turn(0).is_none());
        assert!(d.system_turn(3).is_none());
        assert_eq!(d.user_turn_before(3).unwrap().utterance, "c");
    }
}
