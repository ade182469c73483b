use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CodecError, Flavor, ACTION, BELIEF, CHITCHAT_ACT, CHITCHAT_IN, HISTORY, RESPONSE, TASK_IN};
use crate::corpus::{ActionTriplet, BeliefTriplet};
use crate::generation::Position;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedGeneration {
    pub belief: BTreeSet<BeliefTriplet>,
    pub actions: BTreeSet<ActionTriplet>,
    pub has_chitchat_act: bool,
    /// Where the marker sits relative to the action segment, if present.
    pub chitchat_position: Option<Position>,
    /// Full response text, add-on included, in surface order.
    pub response: String,
    /// Triplets dropped for having the wrong number of fields.
    pub warnings: usize,
}

const TOKENS: [&str; 7] = [HISTORY, TASK_IN, CHITCHAT_IN, BELIEF, CHITCHAT_ACT, ACTION, RESPONSE];

/// Split on commas not preceded by a backslash escape.
fn split_unescaped(payload: &str) -> Vec<String> {
    let mut pieces = Vec::new();
    let mut cur = String::new();
    let mut chars = payload.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                cur.push(c);
                if let Some(next) = chars.next() {
                    cur.push(next);
                }
            }
            ',' => pieces.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    pieces.push(cur);
    pieces
}

fn unescape(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    let mut chars = value.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn parse_belief(payload: &str, warnings: &mut usize) -> BTreeSet<BeliefTriplet> {
    let mut out = BTreeSet::new();
    if payload.is_empty() {
        return out;
    }
    for piece in split_unescaped(payload) {
        let mut fields = piece.trim().splitn(3, ' ');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(d), Some(s), Some(v)) if !d.is_empty() && !s.is_empty() && !v.trim().is_empty() => {
                out.insert(BeliefTriplet::new(d, s, unescape(v)));
            }
            _ => *warnings += 1,
        }
    }
    out
}

fn parse_actions(payload: &str, warnings: &mut usize) -> BTreeSet<ActionTriplet> {
    let mut out = BTreeSet::new();
    if payload.is_empty() {
        return out;
    }
    for piece in split_unescaped(payload) {
        let fields: Vec<&str> = piece.split_whitespace().collect();
        match fields[..] {
            [d, a] => {
                out.insert(ActionTriplet::new(d, a, ""));
            }
            [d, a, s] => {
                out.insert(ActionTriplet::new(d, a, s));
            }
            _ => *warnings += 1,
        }
    }
    out
}

/// Recover belief, actions, marker and response from generated text.
///
/// Missing segments parse as empty. Malformed triplets are dropped and
/// counted in `warnings`. The flavor does not change the grammar; it is
/// accepted so callers can pass what they encoded with.
pub fn parse_generation(_flavor: Flavor, text: &str) -> Result<ParsedGeneration, CodecError> {
    let mut marks: Vec<(usize, &str)> = Vec::new();
    for tok in TOKENS {
        marks.extend(text.match_indices(tok).map(|(i, _)| (i, tok)));
    }
    if marks.is_empty() {
        return Err(CodecError::Unparseable);
    }
    marks.sort_unstable();

    // first occurrence of each segment wins
    let mut payloads: Vec<(&str, usize, &str)> = Vec::new();
    for (k, &(start, tok)) in marks.iter().enumerate() {
        let end = marks.get(k + 1).map_or(text.len(), |m| m.0);
        if payloads.iter().all(|(t, _, _)| *t != tok) {
            payloads.push((tok, start, text[start + tok.len()..end].trim()));
        }
    }
    let get = |tok: &str| payloads.iter().find(|(t, _, _)| *t == tok).map(|(_, pos, p)| (*pos, *p));

    let mut warnings = 0;
    let belief = get(BELIEF).map(|(_, p)| parse_belief(p, &mut warnings)).unwrap_or_default();
    let actions = get(ACTION).map(|(_, p)| parse_actions(p, &mut warnings)).unwrap_or_default();
    let marker = get(CHITCHAT_ACT).map(|(pos, _)| pos);
    let chitchat_position = marker.map(|m| match get(ACTION) {
        Some((a, _)) if a < m => Position::Append,
        _ => Position::Prepend,
    });
    Ok(ParsedGeneration {
        belief,
        actions,
        has_chitchat_act: marker.is_some(),
        chitchat_position,
        response: get(RESPONSE).map(|(_, p)| p.to_string()).unwrap_or_default(),
        warnings,
    })
}
