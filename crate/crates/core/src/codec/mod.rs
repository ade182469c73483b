//! Training sequences for causal-LM dialogue models and parsing of their output.
//!
//! Three layouts share one token inventory:
//!
//! ```text
//! plain:    <|history|> H <|belief|> B <|action|> A <|response|> T
//! prepend:  <|history|> H <|belief|> B <|chitchat|> <|action|> A <|response|> C T
//! append:   <|history|> H <|belief|> B <|action|> A <|chitchat|> <|response|> T C
//! rewriter: <|history|> H <|task|> T_in <|chitchat_in|> C_in <|belief|> B ...
//! ```
//!
//! Belief triplets are `domain slot value` and actions `domain act [slot]`,
//! joined by `, `. Commas and backslashes inside values are escaped with a
//! backslash.

mod expand;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::attach;
use crate::backend::ContextTurn;
use crate::corpus::{ActionTriplet, BeliefTriplet, CorpusError};
use crate::generation::Position;

pub use expand::{expand_training_set, SequenceRecord};
pub use parse::{parse_generation, ParsedGeneration};

pub const HISTORY: &str = "<|history|>";
pub const BELIEF: &str = "<|belief|>";
pub const ACTION: &str = "<|action|>";
pub const RESPONSE: &str = "<|response|>";
pub const TASK_IN: &str = "<|task|>";
pub const CHITCHAT_IN: &str = "<|chitchat_in|>";
pub const CHITCHAT_ACT: &str = "<|chitchat|>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Flavor {
    Simpletod,
    SimpletodPlus,
    Rewriter,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Simpletod => "simpletod",
            Flavor::SimpletodPlus => "plus",
            Flavor::Rewriter => "rewriter",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '+'], "_").as_str() {
            "simpletod" => Ok(Flavor::Simpletod),
            "plus" | "simpletod_plus" | "simpletod_" => Ok(Flavor::SimpletodPlus),
            "rewriter" => Ok(Flavor::Rewriter),
            _ => Err(format!("unknown flavor {s:?} (expected simpletod, plus or rewriter)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SegmentKind {
    History,
    TaskResponseIn,
    ChitchatIn,
    Belief,
    ChitchatAct,
    Actions,
    Candidate,
    Response,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingSequence {
    pub flavor: Flavor,
    pub segments: Vec<(SegmentKind, String)>,
    pub text: String,
}

impl TrainingSequence {
    pub fn kinds(&self) -> Vec<SegmentKind> {
        self.segments.iter().map(|(k, _)| *k).collect()
    }
}

/// Everything one system turn contributes to a sequence.
#[derive(Debug, Clone, Copy)]
pub struct EncodeInput<'a> {
    pub history: &'a [ContextTurn],
    pub belief: &'a BTreeSet<BeliefTriplet>,
    pub actions: &'a BTreeSet<ActionTriplet>,
    pub task_response: &'a str,
    pub candidate: Option<(&'a str, Position)>,
    /// `(task_response_in, chitchat_in)` for the rewriter layout.
    pub rewriter_inputs: Option<(&'a str, &'a str)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("{0} is required for this flavor")]
    MissingInput(&'static str),
    #[error("the plain flavor cannot carry a chit-chat candidate")]
    CandidateNotAllowed,
    #[error("{field} {value:?} cannot be serialized")]
    InvalidField { field: &'static str, value: String },
    #[error("no boundary tokens found")]
    Unparseable,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

fn check_payload(field: &'static str, value: &str) -> Result<(), CodecError> {
    if value.contains("<|") {
        return Err(CodecError::InvalidField { field, value: value.to_string() });
    }
    Ok(())
}

fn check_name(field: &'static str, value: &str) -> Result<(), CodecError> {
    if value.is_empty() || value.chars().any(|c| c.is_whitespace() || c == ',' || c == '\\') || value.contains("<|") {
        return Err(CodecError::InvalidField { field, value: value.to_string() });
    }
    Ok(())
}

pub(crate) fn escape(value: &str) -> String {
    value.replace('\\', "\\\\").replace(',', "\\,")
}

fn serialize_history(history: &[ContextTurn]) -> Result<String, CodecError> {
    let mut parts = Vec::with_capacity(history.len());
    for t in history {
        check_payload("history utterance", &t.utterance)?;
        parts.push(format!("{}: {}", t.speaker.as_str(), t.utterance));
    }
    Ok(parts.join(" "))
}

pub fn serialize_belief(belief: &BTreeSet<BeliefTriplet>) -> Result<String, CodecError> {
    let mut parts = Vec::with_capacity(belief.len());
    for t in belief {
        check_name("belief domain", &t.domain)?;
        check_name("belief slot", &t.slot)?;
        if t.value.trim().is_empty() || t.value.trim() != t.value || t.value.contains("<|") {
            return Err(CodecError::InvalidField { field: "belief value", value: t.value.clone() });
        }
        parts.push(format!("{} {} {}", t.domain, t.slot, escape(&t.value)));
    }
    Ok(parts.join(", "))
}

pub fn serialize_actions(actions: &BTreeSet<ActionTriplet>) -> Result<String, CodecError> {
    let mut parts = Vec::with_capacity(actions.len());
    for a in actions {
        check_name("action domain", &a.domain)?;
        check_name("action type", &a.action_type)?;
        if a.slot.is_empty() {
            parts.push(format!("{} {}", a.domain, a.action_type));
        } else {
            check_name("action slot", &a.slot)?;
            parts.push(format!("{} {} {}", a.domain, a.action_type, a.slot));
        }
    }
    Ok(parts.join(", "))
}

fn token_of(kind: SegmentKind) -> Option<&'static str> {
    match kind {
        SegmentKind::History => Some(HISTORY),
        SegmentKind::TaskResponseIn => Some(TASK_IN),
        SegmentKind::ChitchatIn => Some(CHITCHAT_IN),
        SegmentKind::Belief => Some(BELIEF),
        SegmentKind::ChitchatAct => Some(CHITCHAT_ACT),
        SegmentKind::Actions => Some(ACTION),
        SegmentKind::Response => Some(RESPONSE),
        // shares the response token
        SegmentKind::Candidate => None,
    }
}

/// Serialize one system turn in the layout of `flavor`.
///
/// Without a candidate the plus layout is byte-identical to the plain one.
pub fn encode(flavor: Flavor, input: &EncodeInput<'_>) -> Result<TrainingSequence, CodecError> {
    if flavor == Flavor::Simpletod && input.candidate.is_some() {
        return Err(CodecError::CandidateNotAllowed);
    }
    check_payload("task response", input.task_response)?;
    let mut segments = vec![(SegmentKind::History, serialize_history(input.history)?)];
    if flavor == Flavor::Rewriter {
        let (task_in, chitchat_in) = input.rewriter_inputs.ok_or(CodecError::MissingInput("rewriter_inputs"))?;
        check_payload("task response input", task_in)?;
        check_payload("chit-chat input", chitchat_in)?;
        segments.push((SegmentKind::TaskResponseIn, task_in.to_string()));
        segments.push((SegmentKind::ChitchatIn, chitchat_in.to_string()));
    }
    segments.push((SegmentKind::Belief, serialize_belief(input.belief)?));
    let actions = (SegmentKind::Actions, serialize_actions(input.actions)?);
    let response = (SegmentKind::Response, input.task_response.to_string());
    match input.candidate {
        None => segments.extend([actions, response]),
        Some((text, position)) => {
            check_payload("candidate", text)?;
            let marker = (SegmentKind::ChitchatAct, String::new());
            let candidate = (SegmentKind::Candidate, text.to_string());
            match position {
                Position::Prepend => segments.extend([marker, actions, candidate, response]),
                Position::Append => segments.extend([actions, marker, response, candidate]),
            }
        }
    }
    let text = render(&segments);
    Ok(TrainingSequence { flavor, segments, text })
}

fn render(segments: &[(SegmentKind, String)]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < segments.len() {
        let (kind, payload) = &segments[i];
        if *kind == SegmentKind::Candidate {
            if let Some((SegmentKind::Response, task)) = segments.get(i + 1) {
                out.push(RESPONSE.to_string());
                let joined = attach(task, payload, Position::Prepend);
                if !joined.is_empty() {
                    out.push(joined);
                }
                i += 2;
                continue;
            }
        }
        if let Some(tok) = token_of(*kind) {
            out.push(tok.to_string());
        }
        if !payload.is_empty() {
            out.push(payload.clone());
        }
        i += 1;
    }
    out.join(" ")
}
