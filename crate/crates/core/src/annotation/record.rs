use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AnnotationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Good,
    Bad,
}

impl Label {
    pub fn flipped(self) -> Self {
        match self {
            Label::Good => Label::Bad,
            Label::Bad => Label::Good,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Good => "GOOD",
            Label::Bad => "BAD",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Justification {
    Social,
    Useful,
    Inappropriate,
    Misleading,
}

impl Justification {
    pub const ALL: [Justification; 4] =
        [Justification::Social, Justification::Useful, Justification::Inappropriate, Justification::Misleading];

    /// The label this justification may accompany.
    pub fn label(self) -> Label {
        match self {
            Justification::Social | Justification::Useful => Label::Good,
            Justification::Inappropriate | Justification::Misleading => Label::Bad,
        }
    }

    /// Justifications legal for `label`.
    pub fn allowed_for(label: Label) -> [Justification; 2] {
        match label {
            Label::Good => [Justification::Social, Justification::Useful],
            Label::Bad => [Justification::Inappropriate, Justification::Misleading],
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Justification::Social => "SOCIAL",
            Justification::Useful => "USEFUL",
            Justification::Inappropriate => "INAPPROPRIATE",
            Justification::Misleading => "MISLEADING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub candidate_id: String,
    pub annotator_id: String,
    pub label: Label,
    #[serde(default)]
    pub justifications: BTreeSet<Justification>,
    /// Milliseconds since the Unix epoch.
    #[serde(default)]
    pub timestamp: u64,
}

impl AnnotationRecord {
    pub fn new(candidate_id: impl Into<String>, annotator_id: impl Into<String>, label: Label) -> Self {
        Self {
            candidate_id: candidate_id.into(),
            annotator_id: annotator_id.into(),
            label,
            justifications: BTreeSet::new(),
            timestamp: 0,
        }
    }

    pub fn with(mut self, justification: Justification) -> Self {
        self.justifications.insert(justification);
        self
    }

    /// Good labels take only social/useful; bad labels only inappropriate/misleading.
    pub fn validate(&self) -> Result<(), AnnotationError> {
        match self.justifications.iter().find(|j| j.label() != self.label) {
            Some(&justification) => Err(AnnotationError::Schema { label: self.label, justification }),
            None => Ok(()),
        }
    }
}
