//! Schema-guided dialogue (SGD) file format.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{domain_of, ActionTriplet, BeliefTriplet, Dialogue, Frame, SlotSpan, Speaker, Turn};

#[derive(Debug, Serialize, Deserialize)]
pub(super) struct SgdDialogue {
    dialogue_id: String,
    #[serde(default)]
    services: Vec<String>,
    turns: Vec<SgdTurn>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SgdTurn {
    speaker: Speaker,
    utterance: String,
    #[serde(default)]
    frames: Vec<SgdFrame>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SgdFrame {
    service: String,
    #[serde(default)]
    slots: Vec<SgdSlot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<SgdState>,
    #[serde(default)]
    actions: Vec<SgdAction>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SgdSlot {
    slot: String,
    start: usize,
    exclusive_end: usize,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct SgdState {
    #[serde(default)]
    active_intent: String,
    #[serde(default)]
    requested_slots: Vec<String>,
    #[serde(default)]
    slot_values: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SgdAction {
    act: String,
    #[serde(default)]
    slot: String,
    #[serde(default)]
    values: Vec<String>,
}

impl SgdDialogue {
    pub(super) fn into_dialogue(self) -> Dialogue {
        let turns = self
            .turns
            .into_iter()
            .enumerate()
            .map(|(index, t)| {
                let frames = t.frames.into_iter().map(|f| convert_frame(f, t.speaker)).collect();
                Turn { index, speaker: t.speaker, utterance: t.utterance, frames }
            })
            .collect();
        Dialogue { id: self.dialogue_id, services: self.services, turns }
    }

    pub(super) fn from_dialogue(d: &Dialogue) -> Self {
        let turns = d
            .turns
            .iter()
            .map(|t| SgdTurn {
                speaker: t.speaker,
                utterance: t.utterance.clone(),
                frames: t.frames.iter().map(|f| export_frame(f, t.speaker)).collect(),
            })
            .collect();
        SgdDialogue { dialogue_id: d.id.clone(), services: d.services.clone(), turns }
    }
}

// User turns keep dialogue state only, system turns keep actions only.
fn convert_frame(f: SgdFrame, speaker: Speaker) -> Frame {
    let domain = domain_of(&f.service);
    let belief: BTreeSet<BeliefTriplet> = match (speaker, f.state) {
        (Speaker::User, Some(state)) => state
            .slot_values
            .into_iter()
            .filter_map(|(slot, values)| {
                values.into_iter().next().map(|v| BeliefTriplet::new(domain.clone(), slot, v))
            })
            .collect(),
        _ => BTreeSet::new(),
    };
    let actions: BTreeSet<ActionTriplet> = match speaker {
        Speaker::System => f
            .actions
            .into_iter()
            .map(|a| ActionTriplet::new(domain.clone(), a.act.to_lowercase(), a.slot))
            .collect(),
        Speaker::User => BTreeSet::new(),
    };
    let slot_spans = f.slots.into_iter().map(|s| SlotSpan::new(s.slot, s.start, s.exclusive_end)).collect();
    Frame { service: f.service, belief, actions, slot_spans }
}

fn export_frame(f: &Frame, speaker: Speaker) -> SgdFrame {
    let state = (speaker == Speaker::User).then(|| SgdState {
        slot_values: f.belief.iter().map(|b| (b.slot.clone(), vec![b.value.clone()])).collect(),
        ..SgdState::default()
    });
    SgdFrame {
        service: f.service.clone(),
        slots: f
            .slot_spans
            .iter()
            .map(|s| SgdSlot { slot: s.slot.clone(), start: s.start, exclusive_end: s.end })
            .collect(),
        state,
        actions: f
            .actions
            .iter()
            .map(|a| SgdAction { act: a.action_type.clone(), slot: a.slot.clone(), values: Vec::new() })
            .collect(),
    }
}
