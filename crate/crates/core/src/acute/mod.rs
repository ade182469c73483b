//! Pairwise human-preference evaluation over complete dialogues.
//!
//! Judges see two full transcripts side by side and pick one on a single
//! axis. Side assignment is randomized per task and undone at aggregation;
//! win rates are tested against chance with an exact binomial test.

mod aggregate;
mod binomial;
mod pairs;
mod sample;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::ContextTurn;

pub use aggregate::{aggregate, render_matrix, CellReport};
pub use binomial::two_sided_binomial_p;
pub use pairs::build_pairs;
pub use sample::{make_frequency_variant, qualifies, sample_eval_dialogues, GoodByTurn, SampleCriteria};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Axis {
    Engaging,
    Interesting,
    Humanlike,
    Knowledgeable,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::Engaging, Axis::Interesting, Axis::Humanlike, Axis::Knowledgeable];

    /// The question shown to judges for this axis.
    pub fn prompt(self) -> &'static str {
        match self {
            Axis::Engaging => {
                "Who would you prefer to talk to? Which version is more likely to hold your attention and make you want to hear more?"
            }
            Axis::Interesting => {
                "Who would you say is more interesting? Which version arouses your curiosity or tells you something new or useful?"
            }
            Axis::Humanlike => "Who would you say sounds more human? Which version is more natural and personable?",
            Axis::Knowledgeable => {
                "Who would you say is more knowledgeable? Which version seems more well informed and confident in the information?"
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Engaging => "engaging",
            Axis::Interesting => "interesting",
            Axis::Humanlike => "humanlike",
            Axis::Knowledgeable => "knowledgeable",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axis {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTask {
    pub id: String,
    pub axis: Axis,
    pub dialogue_id: String,
    pub left: Vec<ContextTurn>,
    pub right: Vec<ContextTurn>,
    pub left_system: String,
    pub right_system: String,
    pub prompt: String,
}

/// What a judge is shown: everything except which system is on which side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonView {
    pub id: String,
    pub axis: Axis,
    pub left: Vec<ContextTurn>,
    pub right: Vec<ContextTurn>,
    pub prompt: String,
}

impl ComparisonTask {
    pub fn judge_view(&self) -> ComparisonView {
        ComparisonView {
            id: self.id.clone(),
            axis: self.axis,
            left: self.left.clone(),
            right: self.right.clone(),
            prompt: self.prompt.clone(),
        }
    }

    pub fn system_on(&self, side: Side) -> &str {
        match side {
            Side::Left => &self.left_system,
            Side::Right => &self.right_system,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub task_id: String,
    pub judge_id: String,
    pub winner: Side,
    #[serde(default)]
    pub timestamp: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum AcuteError {
    #[error("only {available} dialogues qualify, {requested} requested")]
    InsufficientData { available: usize, requested: usize },
    #[error("injection interval {interval} unreachable for dialogue {dialogue_id}: {augmentable} of {total} system turns augmentable")]
    Infeasible { dialogue_id: String, interval: String, augmentable: usize, total: usize },
    #[error("need at least two systems, got {0}")]
    TooFewSystems(usize),
    #[error("systems {0} and {1} share no dialogues")]
    NoSharedDialogues(String, String),
    #[error("result references unknown task {0}")]
    UnknownTask(String),
}
