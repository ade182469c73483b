//! Automatic evaluation: goal accuracy, act-slot F1, BLEU-4 and injection frequency.

mod bleu;
mod frequency;
mod goal;
mod report;

use thiserror::Error;

pub use bleu::bleu4;
pub use frequency::{injection_frequency, FrequencyInterval};
pub use goal::{act_slot_f1, average_goal_accuracy, joint_goal_accuracy};
pub use report::{evaluate, EvalReport, SplitMetrics, TurnPrediction, AVG_GA_CONVENTION};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("{pred} predicted turns but {gold} gold turns")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("no hypotheses to score")]
    EmptyHypotheses,
    #[error("dialogue {0} has no system turns")]
    NoSystemTurns(String),
    #[error("no prediction for dialogue {dialogue_id} turn {turn_index}")]
    MissingPrediction { dialogue_id: String, turn_index: usize },
    #[error("prediction for unknown dialogue {dialogue_id} turn {turn_index}")]
    UnknownTurn { dialogue_id: String, turn_index: usize },
    #[error("no turns to evaluate")]
    Empty,
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
}
