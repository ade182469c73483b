use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::record::{AnnotationRecord, Justification, Label};
use crate::generation::ChitChatCandidate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCandidate {
    pub candidate: ChitChatCandidate,
    pub final_label: Label,
    pub justification_tally: BTreeMap<Justification, usize>,
    pub records: Vec<AnnotationRecord>,
}

impl LabeledCandidate {
    pub fn is_good(&self) -> bool {
        self.final_label == Label::Good
    }

    /// Justifications chosen by a strict majority of the annotators who gave
    /// the final label.
    pub fn majority_justifications(&self) -> Vec<Justification> {
        let voters = self.records.iter().filter(|r| r.label == self.final_label).count();
        Justification::allowed_for(self.final_label)
            .into_iter()
            .filter(|j| self.justification_tally.get(j).copied().unwrap_or(0) * 2 > voters)
            .collect()
    }
}

/// Strict-majority label; ties resolve to BAD. Returns `None` without records.
pub fn aggregate(candidate: ChitChatCandidate, records: Vec<AnnotationRecord>) -> Option<LabeledCandidate> {
    if records.is_empty() {
        return None;
    }
    let good = records.iter().filter(|r| r.label == Label::Good).count();
    let final_label = if good * 2 > records.len() { Label::Good } else { Label::Bad };
    let mut justification_tally = BTreeMap::new();
    for j in records.iter().flat_map(|r| r.justifications.iter()) {
        *justification_tally.entry(*j).or_insert(0) += 1;
    }
    Some(LabeledCandidate { candidate, final_label, justification_tally, records })
}
