//! Human GOOD/BAD labels over filtered candidates: schema, aggregation,
//! agreement, corpus statistics, task export and the append-only store.

mod aggregate;
mod export;
mod kappa;
mod record;
mod stats;
mod store;

use std::collections::HashMap;

use thiserror::Error;

pub use aggregate::{aggregate, LabeledCandidate};
pub use export::{export_tasks, read_batches, write_batches, AnnotationTask, TaskBatch, ASSISTANT_GUIDANCE};
pub use kappa::{fleiss_kappa, fleiss_kappa_counts, KappaError, KappaReport};
pub use record::{AnnotationRecord, Justification, Label};
pub use stats::{corpus_stats, CategoryCount, CorpusStats};
pub use store::{AnnotationStore, LogEntry, Snapshot};

use crate::acute::GoodByTurn;

#[derive(Debug, Error, PartialEq)]
pub enum AnnotationError {
    #[error("justification {justification} is not allowed with label {label}")]
    Schema { label: Label, justification: Justification },
    #[error("unknown candidate {0}")]
    UnknownCandidate(String),
    #[error("unknown comparison task {0}")]
    UnknownTask(String),
    #[error("candidate refers to unknown dialogue {0}")]
    UnknownDialogue(String),
    #[error("batch size must be at least 1")]
    InvalidBatchSize,
    #[error("corrupt record on line {line}: {message}")]
    CorruptLog { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for AnnotationError {
    fn from(e: std::io::Error) -> Self {
        AnnotationError::Io(e.to_string())
    }
}

/// Good candidates grouped by dialogue and turn, keeping the input order
/// within each turn.
pub fn good_by_turn(labeled: &[LabeledCandidate]) -> HashMap<String, GoodByTurn> {
    let mut out: HashMap<String, GoodByTurn> = HashMap::new();
    for l in labeled.iter().filter(|l| l.is_good()) {
        out.entry(l.candidate.dialogue_id.clone())
            .or_default()
            .entry(l.candidate.turn_index)
            .or_default()
            .push(l.candidate.clone());
    }
    out
}
