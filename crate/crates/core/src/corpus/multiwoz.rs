//! MultiWOZ 2.1 `data.json` layout: an object keyed by dialogue id whose
//! `log` alternates user and system turns. Belief states live in the
//! `metadata` of the following system turn; acts are `Domain-Act` keyed
//! lists of `[slot, value]`; spans are word indices.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use serde_json::Value;

use super::{ActionTriplet, BeliefTriplet, Dialogue, Frame, SlotSpan, Speaker, Turn};

#[derive(Debug, Deserialize)]
pub(super) struct MwozDialogue {
    #[serde(default)]
    log: Vec<MwozTurn>,
}

#[derive(Debug, Deserialize)]
struct MwozTurn {
    text: String,
    #[serde(default)]
    metadata: Value,
    #[serde(default)]
    dialog_act: Value,
    #[serde(default)]
    span_info: Vec<Value>,
}

const EMPTY_VALUES: [&str; 3] = ["", "not mentioned", "none"];

impl MwozDialogue {
    pub(super) fn into_dialogue(self, id: String) -> Dialogue {
        let n = self.log.len();
        let mut turns = Vec::with_capacity(n);
        for (index, turn) in self.log.iter().enumerate() {
            let speaker = if index % 2 == 0 { Speaker::User } else { Speaker::System };
            let mut frames: BTreeMap<String, Frame> = BTreeMap::new();

            match speaker {
                Speaker::User => {
                    if let Some(next) = self.log.get(index + 1) {
                        for b in belief_from_metadata(&next.metadata) {
                            frame_for(&mut frames, &b.domain).belief.insert(b);
                        }
                    }
                }
                Speaker::System => {
                    for a in actions_from_acts(&turn.dialog_act) {
                        frame_for(&mut frames, &a.domain).actions.insert(a);
                    }
                }
            }
            for (domain, span) in spans_from_info(&turn.text, &turn.span_info) {
                let f = frame_for(&mut frames, &domain);
                if !f.slot_spans.contains(&span) {
                    f.slot_spans.push(span);
                }
            }
            let frames = frames.into_values().map(drop_overlaps).collect();
            turns.push(Turn { index, speaker, utterance: turn.text.trim().to_string(), frames });
        }

        let services: BTreeSet<String> = turns.iter().flat_map(|t| t.frames.iter().map(|f| f.service.clone())).collect();
        Dialogue { id, services: services.into_iter().collect(), turns }
    }
}

fn frame_for<'a>(frames: &'a mut BTreeMap<String, Frame>, domain: &str) -> &'a mut Frame {
    frames.entry(domain.to_string()).or_insert_with(|| Frame::new(domain))
}

fn drop_overlaps(mut frame: Frame) -> Frame {
    frame.slot_spans.sort_by_key(|s| (s.start, s.end));
    let mut kept: Vec<SlotSpan> = Vec::with_capacity(frame.slot_spans.len());
    for s in frame.slot_spans {
        if kept.last().is_none_or(|k| s.start >= k.end) {
            kept.push(s);
        }
    }
    frame.slot_spans = kept;
    frame
}

fn belief_from_metadata(metadata: &Value) -> Vec<BeliefTriplet> {
    let Some(domains) = metadata.as_object() else { return Vec::new() };
    let mut out = Vec::new();
    for (domain, parts) in domains {
        for part in ["semi", "book"] {
            let Some(slots) = parts.get(part).and_then(Value::as_object) else { continue };
            for (slot, value) in slots {
                let Some(v) = value.as_str() else { continue };
                let v = v.trim();
                if EMPTY_VALUES.contains(&v.to_lowercase().as_str()) {
                    continue;
                }
                out.push(BeliefTriplet::new(domain.to_lowercase(), slot.to_lowercase(), v));
            }
        }
    }
    out
}

fn split_act(key: &str) -> Option<(String, String)> {
    let (domain, act) = key.split_once('-')?;
    Some((domain.to_lowercase(), act.to_lowercase()))
}

fn actions_from_acts(acts: &Value) -> Vec<ActionTriplet> {
    let Some(acts) = acts.as_object() else { return Vec::new() };
    let mut out = Vec::new();
    for (key, pairs) in acts {
        let Some((domain, act)) = split_act(key) else { continue };
        let slots: Vec<String> = pairs
            .as_array()
            .map(|ps| {
                ps.iter()
                    .filter_map(|p| p.get(0).and_then(Value::as_str))
                    .map(|s| if s.eq_ignore_ascii_case("none") { String::new() } else { s.to_lowercase() })
                    .collect()
            })
            .unwrap_or_default();
        if slots.is_empty() {
            out.push(ActionTriplet::new(domain.clone(), act.clone(), ""));
        }
        for slot in slots {
            out.push(ActionTriplet::new(domain.clone(), act.clone(), slot));
        }
    }
    out
}

// `[act, slot, value, first_word, last_word]` with inclusive word indices
// over the whitespace-split utterance.
fn spans_from_info(text: &str, info: &[Value]) -> Vec<(String, SlotSpan)> {
    let trimmed = text.trim();
    let mut words: Vec<(usize, usize)> = Vec::new();
    let mut start: Option<usize> = None;
    let mut pos = 0;
    for c in trimmed.chars() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                words.push((s, pos));
            }
        } else if start.is_none() {
            start = Some(pos);
        }
        pos += 1;
    }
    if let Some(s) = start {
        words.push((s, pos));
    }

    info.iter()
        .filter_map(|entry| {
            let e = entry.as_array()?;
            let (domain, _) = split_act(e.first()?.as_str()?)?;
            let slot = e.get(1)?.as_str()?.to_lowercase();
            let first = e.get(3)?.as_u64()? as usize;
            let last = e.get(4)?.as_u64()? as usize;
            let (s, _) = *words.get(first)?;
            let (_, end) = *words.get(last)?;
            (first <= last).then(|| (domain, SlotSpan::new(slot, s, end)))
        })
        .collect()
}
