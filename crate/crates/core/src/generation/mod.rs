//! Chit-chat candidate generation.
//!
//! For system turn `s_i` a backend either continues `s_i` given the context
//! through `s_i` (the result is appended to it), or writes a fresh turn given
//! the context through `u_i` (the result is prepended). Multi-sentence
//! outputs additionally contribute each sentence as its own candidate.

mod backends;
mod pool;
mod splitter;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::backend::{BackendError, ContextTurn};
use crate::corpus::Dialogue;

pub use backends::{
    ConstantGenerator, DecodingParams, GenerationRequest, GenerationResponse, GeneratorBackend, HttpGenerator,
    TableGenerator, TemplateGenerator,
};
pub use pool::{
    generate_corpus_pools, generate_pool, CandidatePool, GenerationOptions, GenerationOutcome, GenerationRun, RequestFailure,
};
pub use splitter::split_sentences;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationMode {
    /// Extend `s_i`; produces append candidates.
    Continue,
    /// Write a new turn after `u_i`; produces prepend candidates.
    NewTurn,
}

impl GenerationMode {
    pub const ALL: [GenerationMode; 2] = [GenerationMode::Continue, GenerationMode::NewTurn];

    pub fn position(self) -> Position {
        match self {
            GenerationMode::Continue => Position::Append,
            GenerationMode::NewTurn => Position::Prepend,
        }
    }
}

/// Where a candidate attaches to its system turn. `Prepend` orders first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Prepend,
    Append,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Prepend => "prepend",
            Position::Append => "append",
        })
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prepend" => Ok(Position::Prepend),
            "append" => Ok(Position::Append),
            other => Err(format!("unknown position {other:?}")),
        }
    }
}

/// Which backend and decoding configuration produced a candidate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CandidateSource {
    pub backend: String,
    pub params: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChitChatCandidate {
    pub id: String,
    pub dialogue_id: String,
    /// Index of the system turn within the dialogue's turn list.
    pub turn_index: usize,
    pub text: String,
    pub position: Position,
    pub source: CandidateSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
}

impl ChitChatCandidate {
    /// Stable id from dialogue, turn, position and normalized text.
    pub fn make_id(dialogue_id: &str, turn_index: usize, position: Position, text: &str) -> String {
        let mut h = Sha256::new();
        h.update(dialogue_id.as_bytes());
        h.update([0]);
        h.update(turn_index.to_string().as_bytes());
        h.update([0]);
        h.update(position.to_string().as_bytes());
        h.update([0]);
        h.update(crate::text::normalize(text).as_bytes());
        let digest = h.finalize();
        format!("{dialogue_id}/{turn_index}/{}", hex::encode(&digest[..6]))
    }

    /// Canonical ordering key: turn, then prepend before append, then text.
    pub fn order_key(&self) -> (usize, Position, &str) {
        (self.turn_index, self.position, self.text.as_str())
    }
}

/// One text harvested from a generation, before it is bound to a dialogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarvestedText {
    pub text: String,
    pub position: Position,
    /// Index (within the harvest) of the multi-sentence text this was split from.
    pub split_from: Option<usize>,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenerationError {
    #[error("system turn {ordinal} out of range: dialogue {dialogue_id} has {available} system turns")]
    OutOfRange { dialogue_id: String, ordinal: usize, available: usize },
    #[error("backend {backend} unreachable: {source}")]
    Transport { backend: String, source: BackendError },
    #[error("no generator backends configured")]
    NoBackends,
    #[error("invalid generation options: {0}")]
    InvalidOptions(String),
}

/// Context passed to a backend for system turn `ordinal` (1-based).
pub fn build_context(dialogue: &Dialogue, ordinal: usize, mode: GenerationMode) -> Result<Vec<ContextTurn>, GenerationError> {
    let turn = dialogue.system_turn(ordinal).ok_or_else(|| GenerationError::OutOfRange {
        dialogue_id: dialogue.id.clone(),
        ordinal,
        available: dialogue.num_system_turns(),
    })?;
    let end = match mode {
        GenerationMode::Continue => turn.index + 1,
        GenerationMode::NewTurn => turn.index,
    };
    Ok(dialogue.turns[..end].iter().map(|t| ContextTurn::new(t.speaker, t.utterance.clone())).collect())
}

/// Turn raw backend output into candidates: the whole text, plus one per
/// sentence when it holds two or more.
pub fn harvest(raw_generation: &str, mode: GenerationMode) -> Vec<HarvestedText> {
    let whole = raw_generation.trim();
    if whole.is_empty() {
        return Vec::new();
    }
    let position = mode.position();
    let mut out = vec![HarvestedText { text: whole.to_string(), position, split_from: None }];
    let sentences = split_sentences(whole);
    if sentences.len() >= 2 {
        out.extend(
            sentences
                .into_iter()
                .map(|s| HarvestedText { text: s.to_string(), position, split_from: Some(0) }),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Speaker, Turn};

    fn four_turn() -> Dialogue {
        Dialogue {
            id: "d".into(),
            services: vec![],
            turns: vec![
                Turn::new(0, Speaker::User, "u1"),
                Turn::new(1, Speaker::System, "s1"),
                Turn::new(2, Speaker::User, "u2"),
                Turn::new(3, Speaker::System, "s2"),
            ],
        }
    }

    fn utterances(ctx: &[ContextTurn]) -> Vec<&str> {
        ctx.iter().map(|t| t.utterance.as_str()).collect()
    }

    #[test]
    fn continue_context_ends_at_system_turn() {
        let ctx = build_context(&four_turn(), 1, GenerationMode::Continue).unwrap();
        assert_eq!(utterances(&ctx), vec!["u1", "s1"]);
    }

    #[test]
    fn new_turn_context_ends_at_user_turn() {
        let ctx = build_context(&four_turn(), 2, GenerationMode::NewTurn).unwrap();
        assert_eq!(utterances(&ctx), vec!["u1", "s1", "u2"]);
        assert_eq!(ctx[2].speaker, Speaker::User);
    }

    #[test]
    fn ordinal_out_of_range() {
        let err = build_context(&four_turn(), 3, GenerationMode::Continue).unwrap_err();
        assert_eq!(err, GenerationError::OutOfRange { dialogue_id: "d".into(), ordinal: 3, available: 2 });
        assert!(build_context(&four_turn(), 0, GenerationMode::Continue).is_err());
    }

    #[test]
    fn harvest_two_sentences_gives_three() {
        let h = harvest(
            "It's a Pop event starting at 6:30 pm. It's a great way to kick off the summer.",
            GenerationMode::Continue,
        );
        assert_eq!(h.len(), 3);
        assert_eq!(h[2].text, "It's a great way to kick off the summer.");
        assert!(h.iter().all(|c| c.position == Position::Append));
        assert_eq!(h[1].split_from, Some(0));
    }

    #[test]
    fn harvest_single_and_empty() {
        assert_eq!(harvest("I hear it's beautiful.", GenerationMode::NewTurn).len(), 1);
        assert!(harvest("  \t", GenerationMode::NewTurn).is_empty());
    }

    #[test]
    fn harvest_three_sentences_gives_four() {
        let h = harvest("Great! See you. Bye.", GenerationMode::NewTurn);
        let texts: Vec<&str> = h.iter().map(|c| c.text.as_str()).collect();
        assert_eq!(texts, vec!["Great! See you. Bye.", "Great!", "See you.", "Bye."]);
        assert!(h.iter().all(|c| c.position == Position::Prepend));
    }

    #[test]
    fn candidate_ids_ignore_case_and_spacing() {
        let a = ChitChatCandidate::make_id("d", 1, Position::Append, "You're  welcome.");
        let b = ChitChatCandidate::make_id("d", 1, Position::Append, "you're welcome.");
        let c = ChitChatCandidate::make_id("d", 1, Position::Prepend, "you're welcome.");
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
