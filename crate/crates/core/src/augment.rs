//! Dialogues with chit-chat attached to some system turns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::backend::ContextTurn;
use crate::corpus::{Dialogue, Speaker};
use crate::generation::{ChitChatCandidate, Position};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Augmentation {
    pub candidate_id: String,
    pub text: String,
    pub position: Position,
}

impl From<&ChitChatCandidate> for Augmentation {
    fn from(c: &ChitChatCandidate) -> Self {
        Self { candidate_id: c.id.clone(), text: c.text.clone(), position: c.position }
    }
}

/// Join a chit-chat add-on and a system response with a single space.
pub fn attach(response: &str, chitchat: &str, position: Position) -> String {
    match (response.is_empty(), chitchat.is_empty()) {
        (_, true) => response.to_string(),
        (true, false) => chitchat.to_string(),
        _ => match position {
            Position::Prepend => format!("{chitchat} {response}"),
            Position::Append => format!("{response} {chitchat}"),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedDialogue {
    pub dialogue: Dialogue,
    /// System turn index to the add-on attached to it.
    pub augmentations: BTreeMap<usize, Augmentation>,
}

impl AugmentedDialogue {
    pub fn new(dialogue: Dialogue) -> Self {
        Self { dialogue, augmentations: BTreeMap::new() }
    }

    pub fn augmented_system_turns(&self) -> usize {
        self.dialogue.system_turns().filter(|t| self.augmentations.contains_key(&t.index)).count()
    }

    /// Full conversation with add-ons spliced into their system turns.
    pub fn transcript(&self) -> Vec<ContextTurn> {
        self.dialogue
            .turns
            .iter()
            .map(|t| {
                let utterance = match (t.speaker, self.augmentations.get(&t.index)) {
                    (Speaker::System, Some(a)) => attach(&t.utterance, &a.text, a.position),
                    _ => t.utterance.clone(),
                };
                ContextTurn::new(t.speaker, utterance)
            })
            .collect()
    }

    /// Fraction of system turns carrying an add-on; `None` without system turns.
    pub fn injection_frequency<T: Field>(&self) -> Option<T> {
        let total = self.dialogue.num_system_turns();
        (total > 0).then(|| T::ratio(self.augmented_system_turns(), total))
    }
}
