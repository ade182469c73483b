use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Dialogue, Speaker};

/// Which dialogue invariant a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    FirstTurnNotUser,
    LastTurnNotSystem,
    SpeakerNotAlternating,
    IndexMismatch,
    UserTurnHasActions,
    SystemTurnHasBelief,
    EmptyBeliefField,
    EmptyActionField,
    SpanOutOfBounds,
    SpansOverlap,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::FirstTurnNotUser => "first turn is not a user turn",
            Rule::LastTurnNotSystem => "last turn is not a system turn",
            Rule::SpeakerNotAlternating => "speakers do not alternate",
            Rule::IndexMismatch => "turn index does not match position",
            Rule::UserTurnHasActions => "user turn carries action annotations",
            Rule::SystemTurnHasBelief => "system turn carries belief annotations",
            Rule::EmptyBeliefField => "belief triplet has an empty component",
            Rule::EmptyActionField => "action triplet has an empty domain or action type",
            Rule::SpanOutOfBounds => "slot span outside utterance",
            Rule::SpansOverlap => "slot spans overlap",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub dialogue_id: String,
    pub turn_index: Option<usize>,
    pub rule: Rule,
}

pub fn validate_corpus(dialogues: &[Dialogue]) -> Vec<Violation> {
    dialogues.iter().flat_map(validate_dialogue).collect()
}

pub fn validate_dialogue(dialogue: &Dialogue) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |turn_index: Option<usize>, rule: Rule| {
        out.push(Violation { dialogue_id: dialogue.id.clone(), turn_index, rule });
    };

    match dialogue.turns.first() {
        Some(t) if t.speaker != Speaker::User => push(Some(0), Rule::FirstTurnNotUser),
        _ => {}
    }

    for (pos, turn) in dialogue.turns.iter().enumerate() {
        if turn.index != pos {
            push(Some(pos), Rule::IndexMismatch);
        }
        if pos > 0 && dialogue.turns[pos - 1].speaker == turn.speaker {
            push(Some(pos), Rule::SpeakerNotAlternating);
        }
        let has_belief = turn.frames.iter().any(|f| !f.belief.is_empty());
        let has_actions = turn.frames.iter().any(|f| !f.actions.is_empty());
        match turn.speaker {
            Speaker::User if has_actions => push(Some(pos), Rule::UserTurnHasActions),
            Speaker::System if has_belief => push(Some(pos), Rule::SystemTurnHasBelief),
            _ => {}
        }
        let frames = &turn.frames;
        if frames
            .iter()
            .flat_map(|f| &f.belief)
            .any(|b| b.domain.is_empty() || b.slot.is_empty() || b.value.is_empty())
        {
            push(Some(pos), Rule::EmptyBeliefField);
        }
        if frames
            .iter()
            .flat_map(|f| &f.actions)
            .any(|a| a.domain.is_empty() || a.action_type.is_empty())
        {
            push(Some(pos), Rule::EmptyActionField);
        }

        let len = turn.utterance.chars().count();
        let mut spans: Vec<(usize, usize)> =
            frames.iter().flat_map(|f| f.slot_spans.iter().map(|s| (s.start, s.end))).collect();
        if spans.iter().any(|&(s, e)| s >= e || e > len) {
            push(Some(pos), Rule::SpanOutOfBounds);
        }
        spans.sort_unstable();
        if spans.windows(2).any(|w| w[1].0 < w[0].1) {
            push(Some(pos), Rule::SpansOverlap);
        }
    }

    match dialogue.turns.last() {
        Some(t) if t.speaker == Speaker::System => {}
        Some(t) => push(Some(t.index), Rule::LastTurnNotSystem),
        None => push(None, Rule::LastTurnNotSystem),
    }
    out
}
