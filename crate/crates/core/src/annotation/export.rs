use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::AnnotationError;
use crate::backend::ContextTurn;
use crate::corpus::Dialogue;
use crate::generation::{ChitChatCandidate, Position};

/// Role guidance shown next to every annotation task.
pub const ASSISTANT_GUIDANCE: &str = "\
The assistant is a digital helper, not a person. It may share general opinions, light \
preferences, commentary and well-known facts, and it may mention what it has heard or read. \
It must not claim personal experiences it cannot have, offer to do anything physical, or \
state specific facts that you would need to look up to confirm. Judge this add-on on its \
own, as if it were the only one added to the conversation.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationTask {
    pub task_id: String,
    pub candidate: ChitChatCandidate,
    pub position: Position,
    /// The full dialogue; the candidate attaches to turn `candidate.turn_index`.
    pub context: Vec<ContextTurn>,
    pub guidance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskBatch {
    pub batch_index: usize,
    pub tasks: Vec<AnnotationTask>,
}

/// Bundle filtered candidates with their dialogues into disjoint batches
/// covering every candidate, in input order.
pub fn export_tasks(
    dialogues: &[Dialogue],
    candidates: &[ChitChatCandidate],
    batch_size: usize,
) -> Result<Vec<TaskBatch>, AnnotationError> {
    if batch_size < 1 {
        return Err(AnnotationError::InvalidBatchSize);
    }
    let by_id: HashMap<&str, &Dialogue> = dialogues.iter().map(|d| (d.id.as_str(), d)).collect();
    let tasks = candidates
        .iter()
        .map(|c| {
            let d = by_id
                .get(c.dialogue_id.as_str())
                .ok_or_else(|| AnnotationError::UnknownDialogue(c.dialogue_id.clone()))?;
            Ok(AnnotationTask {
                task_id: c.id.clone(),
                candidate: c.clone(),
                position: c.position,
                context: d.turns.iter().map(|t| ContextTurn::new(t.speaker, t.utterance.clone())).collect(),
                guidance: ASSISTANT_GUIDANCE.to_string(),
            })
        })
        .collect::<Result<Vec<_>, AnnotationError>>()?;
    Ok(tasks
        .chunks(batch_size)
        .enumerate()
        .map(|(batch_index, chunk)| TaskBatch { batch_index, tasks: chunk.to_vec() })
        .collect())
}

/// One batch per line.
pub fn write_batches(batches: &[TaskBatch]) -> Vec<u8> {
    let mut out = Vec::new();
    for b in batches {
        serde_json::to_writer(&mut out, b).expect("batch serializes");
        out.push(b'\n');
    }
    out
}

pub fn read_batches(raw: &[u8]) -> Result<Vec<TaskBatch>, AnnotationError> {
    raw.split(|&b| b == b'\n')
        .enumerate()
        .filter(|(_, l)| !l.iter().all(u8::is_ascii_whitespace) && !l.starts_with(br#"{"header":"#))
        .map(|(i, l)| {
            serde_json::from_slice(l).map_err(|e| AnnotationError::CorruptLog { line: i + 1, message: e.to_string() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Speaker, Turn};
    use crate::generation::CandidateSource;

    fn fixture(n: usize) -> (Vec<Dialogue>, Vec<ChitChatCandidate>) {
        let d = Dialogue {
            id: "d".into(),
            services: vec![],
            turns: vec![Turn::new(0, Speaker::User, "Find a ride."), Turn::new(1, Speaker::System, "Where to?")],
        };
        let cands = (0..n)
            .map(|i| ChitChatCandidate {
                id: format!("c{i}"),
                dialogue_id: "d".into(),
                turn_index: 1,
                text: format!("Candidate {i}."),
                position: if i % 2 == 0 { Position::Prepend } else { Position::Append },
                source: CandidateSource { backend: "b".into(), params: "p".into() },
                parent_id: None,
            })
            .collect();
        (vec![d], cands)
    }

    #[test]
    fn batches_of_ten() {
        let (d, c) = fixture(25);
        let sizes: Vec<usize> = export_tasks(&d, &c, 10).unwrap().iter().map(|b| b.tasks.len()).collect();
        assert_eq!(sizes, vec![10, 10, 5]);
    }

    #[test]
    fn no_candidates_no_batches() {
        let (d, _) = fixture(0);
        assert!(export_tasks(&d, &[], 10).unwrap().is_empty());
    }

    #[test]
    fn zero_batch_size() {
        let (d, c) = fixture(3);
        assert_eq!(export_tasks(&d, &c, 0).unwrap_err(), AnnotationError::InvalidBatchSize);
    }

    #[test]
    fn round_trip() {
        let (d, c) = fixture(7);
        let batches = export_tasks(&d, &c, 3).unwrap();
        assert_eq!(read_batches(&write_batches(&batches)).unwrap(), batches);
        assert_eq!(batches[0].tasks[0].context.len(), 2);
    }

    #[test]
    fn unknown_dialogue() {
        let (_, c) = fixture(1);
        assert!(matches!(export_tasks(&[], &c, 1), Err(AnnotationError::UnknownDialogue(_))));
    }
}
