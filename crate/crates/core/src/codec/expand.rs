use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{encode, CodecError, EncodeInput, Flavor, TrainingSequence};
use crate::annotation::LabeledCandidate;
use crate::backend::ContextTurn;
use crate::corpus::Dialogue;

/// One line of an emitted training set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRecord {
    pub flavor: Flavor,
    pub text: String,
    pub dialogue_id: String,
    pub turn_index: usize,
}

impl SequenceRecord {
    pub fn new(dialogue_id: &str, turn_index: usize, seq: &TrainingSequence) -> Self {
        Self { flavor: seq.flavor, text: seq.text.clone(), dialogue_id: dialogue_id.to_string(), turn_index }
    }
}

/// All training sequences for one dialogue.
///
/// The plain flavor yields one sequence per system turn. The plus flavor
/// yields one per good candidate, or one plain sequence when a turn has
/// none. The rewriter yields one per candidate of either label, using the
/// candidate itself as target when good and the turn's first good candidate
/// otherwise; turns without candidates get a single sequence with an empty
/// chit-chat input.
pub fn expand_training_set(
    dialogue: &Dialogue,
    labeled: &[LabeledCandidate],
    flavor: Flavor,
) -> Result<Vec<SequenceRecord>, CodecError> {
    let mut by_turn: BTreeMap<usize, Vec<&LabeledCandidate>> = BTreeMap::new();
    for l in labeled.iter().filter(|l| l.candidate.dialogue_id == dialogue.id) {
        by_turn.entry(l.candidate.turn_index).or_default().push(l);
    }

    let mut out = Vec::new();
    for turn in dialogue.system_turns() {
        let history: Vec<ContextTurn> = dialogue.turns[..turn.index]
            .iter()
            .map(|t| ContextTurn::new(t.speaker, t.utterance.clone()))
            .collect();
        let belief = dialogue.user_turn_before(turn.index).map(|u| u.belief()).unwrap_or_default();
        let actions = turn.actions();
        let task = turn.delexicalized()?;
        let base = EncodeInput {
            history: &history,
            belief: &belief,
            actions: &actions,
            task_response: &task,
            candidate: None,
            rewriter_inputs: None,
        };
        let cands = by_turn.get(&turn.index).map(Vec::as_slice).unwrap_or_default();
        let good: Vec<&LabeledCandidate> = cands.iter().copied().filter(|l| l.is_good()).collect();
        let mut push = |input: EncodeInput<'_>| -> Result<(), CodecError> {
            out.push(SequenceRecord::new(&dialogue.id, turn.index, &encode(flavor, &input)?));
            Ok(())
        };
        match flavor {
            Flavor::Simpletod => push(base)?,
            Flavor::SimpletodPlus if good.is_empty() => push(base)?,
            Flavor::SimpletodPlus => {
                for g in &good {
                    push(EncodeInput { candidate: Some((&g.candidate.text, g.candidate.position)), ..base })?;
                }
            }
            Flavor::Rewriter if cands.is_empty() => {
                push(EncodeInput { rewriter_inputs: Some((&task, "")), ..base })?;
            }
            Flavor::Rewriter => {
                for c in cands {
                    let target = if c.is_good() { Some(*c) } else { good.first().copied() };
                    push(EncodeInput {
                        candidate: target.map(|t| (t.candidate.text.as_str(), t.candidate.position)),
                        rewriter_inputs: Some((&task, &c.candidate.text)),
                        ..base
                    })?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{aggregate, AnnotationRecord, Label};
    use crate::corpus::{Speaker, Turn};
    use crate::generation::{CandidateSource, ChitChatCandidate, Position};

    fn dialogue() -> Dialogue {
        Dialogue {
            id: "d".into(),
            services: vec![],
            turns: vec![
                Turn::new(0, Speaker::User, "Find me a movie."),
                Turn::new(1, Speaker::System, "Which city?"),
                Turn::new(2, Speaker::User, "San Jose."),
                Turn::new(3, Speaker::System, "I found 3 movies."),
            ],
        }
    }

    fn labeled(turn: usize, text: &str, label: Label) -> LabeledCandidate {
        let c = ChitChatCandidate {
            id: format!("{turn}-{text}"),
            dialogue_id: "d".into(),
            turn_index: turn,
            text: text.into(),
            position: Position::Append,
            source: CandidateSource { backend: "b".into(), params: "p".into() },
            parent_id: None,
        };
        aggregate(c, vec![AnnotationRecord::new("x", "a", label)]).unwrap()
    }

    #[test]
    fn plus_counts() {
        let l = vec![
            labeled(3, "Great.", Label::Good),
            labeled(3, "Fun!", Label::Good),
            labeled(3, "Cool.", Label::Good),
            labeled(1, "Nope.", Label::Bad),
        ];
        let seqs = expand_training_set(&dialogue(), &l, Flavor::SimpletodPlus).unwrap();
        assert_eq!(seqs.len(), 4);
        assert_eq!(seqs.iter().filter(|s| s.turn_index == 3).count(), 3);
        assert_eq!(expand_training_set(&dialogue(), &l, Flavor::Simpletod).unwrap().len(), 2);
    }

    #[test]
    fn rewriter_counts() {
        let l = vec![labeled(3, "Great.", Label::Good), labeled(3, "Fun!", Label::Good), labeled(3, "Ugh.", Label::Bad)];
        let seqs = expand_training_set(&dialogue(), &l, Flavor::Rewriter).unwrap();
        let turn3: Vec<_> = seqs.iter().filter(|s| s.turn_index == 3).collect();
        assert_eq!(turn3.len(), 3);
        // bad input rewritten toward the first good candidate
        assert!(turn3[2].text.contains("<|chitchat_in|> Ugh."));
        assert!(turn3[2].text.ends_with("I found 3 movies. Great."));
        assert_eq!(seqs.len(), 4);
    }
}
