use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{act_slot_f1, average_goal_accuracy, bleu4, joint_goal_accuracy, MetricsError};
use crate::augment::{attach, AugmentedDialogue};
use crate::corpus::{ActionTriplet, BeliefTriplet};
use crate::scalar::Real;

pub const AVG_GA_CONVENTION: &str = "avg_ga counts gold slots with non-empty values; unpredicted slots are errors";

/// Model output for one system turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnPrediction {
    pub dialogue_id: String,
    pub turn_index: usize,
    #[serde(default)]
    pub belief: BTreeSet<BeliefTriplet>,
    #[serde(default)]
    pub actions: BTreeSet<ActionTriplet>,
    pub response: String,
    /// Whether the response carries an add-on.
    #[serde(default)]
    pub chitchat: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitMetrics<T> {
    pub dialogues: usize,
    pub turns: usize,
    pub joint_ga: T,
    pub avg_ga: T,
    pub act_slot_f1: T,
    pub bleu_o: T,
    pub bleu_a: T,
    pub injection_frequency: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<T> {
    pub avg_ga_convention: String,
    pub all: SplitMetrics<T>,
    /// Dialogues whose services all appear in training; `None` if there are none.
    pub seen: Option<SplitMetrics<T>>,
}

#[derive(Default)]
struct Columns {
    dialogues: usize,
    pred_belief: Vec<BTreeSet<BeliefTriplet>>,
    gold_belief: Vec<BTreeSet<BeliefTriplet>>,
    pred_actions: Vec<BTreeSet<ActionTriplet>>,
    gold_actions: Vec<BTreeSet<ActionTriplet>>,
    hyps: Vec<String>,
    refs_original: Vec<String>,
    refs_augmented: Vec<String>,
    chitchat: usize,
}

struct Row<'a> {
    pred: &'a TurnPrediction,
    gold_belief: BTreeSet<BeliefTriplet>,
    gold_actions: BTreeSet<ActionTriplet>,
    original: String,
    augmented: String,
}

impl Columns {
    fn push(&mut self, row: &Row<'_>) {
        self.pred_belief.push(row.pred.belief.clone());
        self.gold_belief.push(row.gold_belief.clone());
        self.pred_actions.push(row.pred.actions.clone());
        self.gold_actions.push(row.gold_actions.clone());
        self.hyps.push(row.pred.response.clone());
        self.refs_original.push(row.original.clone());
        self.refs_augmented.push(row.augmented.clone());
        self.chitchat += usize::from(row.pred.chitchat);
    }

    fn finish<T: Real>(&self) -> Result<SplitMetrics<T>, MetricsError> {
        if self.hyps.is_empty() {
            return Err(MetricsError::Empty);
        }
        Ok(SplitMetrics {
            dialogues: self.dialogues,
            turns: self.hyps.len(),
            joint_ga: joint_goal_accuracy(&self.pred_belief, &self.gold_belief)?,
            avg_ga: average_goal_accuracy(&self.pred_belief, &self.gold_belief)?,
            act_slot_f1: act_slot_f1(&self.pred_actions, &self.gold_actions)?,
            bleu_o: bleu4(&self.hyps, &self.refs_original)?,
            bleu_a: bleu4(&self.hyps, &self.refs_augmented)?,
            injection_frequency: T::ratio(self.chitchat, self.hyps.len()),
        })
    }
}

/// Score per-turn predictions against gold dialogues.
///
/// BLEU-O uses the delexicalized gold responses as references, BLEU-A the
/// same responses with their gold add-ons attached. Every gold system turn
/// needs exactly one prediction.
pub fn evaluate<T: Real>(
    gold: &[AugmentedDialogue],
    predictions: &[TurnPrediction],
    training_services: &BTreeSet<String>,
) -> Result<EvalReport<T>, MetricsError> {
    let mut by_turn: HashMap<(&str, usize), &TurnPrediction> =
        predictions.iter().map(|p| ((p.dialogue_id.as_str(), p.turn_index), p)).collect();

    let mut order: Vec<&AugmentedDialogue> = gold.iter().collect();
    order.sort_by(|a, b| a.dialogue.id.cmp(&b.dialogue.id));

    let mut all = Columns::default();
    let mut seen = Columns::default();
    for ad in order {
        let d = &ad.dialogue;
        let is_seen = d.services.iter().all(|s| training_services.contains(s));
        all.dialogues += 1;
        if is_seen {
            seen.dialogues += 1;
        }
        for turn in d.system_turns() {
            let p = by_turn.remove(&(d.id.as_str(), turn.index)).ok_or_else(|| MetricsError::MissingPrediction {
                dialogue_id: d.id.clone(),
                turn_index: turn.index,
            })?;
            let gold_belief = d.user_turn_before(turn.index).map(|u| u.belief()).unwrap_or_default();
            let original = turn.delexicalized()?;
            let augmented = match ad.augmentations.get(&turn.index) {
                Some(a) => attach(&original, &a.text, a.position),
                None => original.clone(),
            };
            let row = Row { pred: p, gold_belief, gold_actions: turn.actions(), original, augmented };
            all.push(&row);
            if is_seen {
                seen.push(&row);
            }
        }
    }
    if let Some(((dialogue_id, turn_index), _)) = by_turn.into_iter().min_by_key(|(k, _)| *k) {
        return Err(MetricsError::UnknownTurn { dialogue_id: dialogue_id.to_string(), turn_index });
    }
    Ok(EvalReport {
        avg_ga_convention: AVG_GA_CONVENTION.to_string(),
        all: all.finish()?,
        seen: if seen.hyps.is_empty() { None } else { Some(seen.finish()?) },
    })
}

impl<T: Real> EvalReport<T> {
    /// Aligned table: one row per split, goal/F1/frequency as percentages.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<6}{:>6}{:>10}{:>10}{:>14}{:>10}{:>10}{:>10}",
            "split", "turns", "Joint GA", "Avg GA", "Act-Slot F1", "BLEU-O", "BLEU-A", "Freq"
        );
        let pct = |x: T| x.to_f64().unwrap_or(f64::NAN) * 100.0;
        let rows = [("All", Some(&self.all)), ("Seen", self.seen.as_ref())];
        for (name, m) in rows {
            match m {
                Some(m) => {
                    let _ = writeln!(
                        s,
                        "{:<6}{:>6}{:>10.2}{:>10.2}{:>14.2}{:>10.2}{:>10.2}{:>10.2}",
                        name,
                        m.turns,
                        pct(m.joint_ga),
                        pct(m.avg_ga),
                        pct(m.act_slot_f1),
                        m.bleu_o.to_f64().unwrap_or(f64::NAN),
                        m.bleu_a.to_f64().unwrap_or(f64::NAN),
                        pct(m.injection_frequency),
                    );
                }
                None => {
                    let _ = writeln!(s, "{name:<6}{:>6}{:>10}", 0, "-");
                }
            }
        }
        let _ = writeln!(s, "note: {}", self.avg_ga_convention);
        s
    }
}
