use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::backend::{BackendError, ContextTurn, JsonClient};
use crate::text::normalize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceRequest {
    pub history: Vec<ContextTurn>,
    /// Chit-chat first, task first, task only.
    pub arrangements: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceResponse {
    pub probs: Vec<f64>,
}

/// Probability for each of the three arrangements, in fixed order.
pub trait ChoiceScorer: Send + Sync {
    fn probs(&self, request: &ChoiceRequest) -> Result<Vec<f64>, BackendError>;
}

#[derive(Debug, Clone)]
pub struct HttpChoiceScorer {
    client: JsonClient,
}

impl HttpChoiceScorer {
    pub fn new(url: impl Into<String>) -> Self {
        Self { client: JsonClient::new(url) }
    }
}

impl ChoiceScorer for HttpChoiceScorer {
    fn probs(&self, request: &ChoiceRequest) -> Result<Vec<f64>, BackendError> {
        let response: ChoiceResponse = self.client.post(request)?;
        Ok(response.probs)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformChoiceScorer;

impl ChoiceScorer for UniformChoiceScorer {
    fn probs(&self, _request: &ChoiceRequest) -> Result<Vec<f64>, BackendError> {
        Ok(vec![1.0 / 3.0; 3])
    }
}

/// Fixed probabilities keyed by the normalized chit-chat text, recovered
/// from the task-only and task-first arrangements.
#[derive(Debug, Clone)]
pub struct TableChoiceScorer {
    default: [f64; 3],
    table: HashMap<String, [f64; 3]>,
}

impl TableChoiceScorer {
    pub fn new(default: [f64; 3]) -> Self {
        Self { default, table: HashMap::new() }
    }

    pub fn with(mut self, chitchat: &str, probs: [f64; 3]) -> Self {
        self.table.insert(normalize(chitchat), probs);
        self
    }
}

fn chitchat_of(request: &ChoiceRequest) -> &str {
    let [_, task_first, task_only] = &request.arrangements;
    task_first.strip_prefix(task_only.as_str()).map(str::trim).unwrap_or(task_first)
}

impl ChoiceScorer for TableChoiceScorer {
    fn probs(&self, request: &ChoiceRequest) -> Result<Vec<f64>, BackendError> {
        let key = normalize(chitchat_of(request));
        Ok(self.table.get(&key).unwrap_or(&self.default).to_vec())
    }
}

/// Deterministic stand-in for a trained chooser. Replies to thanks and
/// greetings go first, questions go last, and long add-ons are dropped.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicChoiceScorer;

const OPENERS: [&str; 8] = ["you're welcome", "you are welcome", "no problem", "sure", "great", "of course", "hello", "hi"];

impl ChoiceScorer for HeuristicChoiceScorer {
    fn probs(&self, request: &ChoiceRequest) -> Result<Vec<f64>, BackendError> {
        let chitchat = normalize(chitchat_of(request));
        let preferred = if chitchat.split_whitespace().count() > 20 {
            2
        } else if OPENERS.iter().any(|o| chitchat.starts_with(o)) {
            0
        } else {
            1
        };
        let mut probs = vec![0.2; 3];
        probs[preferred] = 0.6;
        Ok(probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(task: &str, chitchat: &str) -> ChoiceRequest {
        ChoiceRequest {
            history: vec![],
            arrangements: [format!("{chitchat} {task}"), format!("{task} {chitchat}"), task.to_string()],
        }
    }

    #[test]
    fn table_lookup_recovers_chitchat() {
        let s = TableChoiceScorer::new([0.2, 0.2, 0.6]).with("Enjoy your day.", [0.5, 0.3, 0.2]);
        assert_eq!(s.probs(&req("You are welcome.", "Enjoy your day.")).unwrap(), vec![0.5, 0.3, 0.2]);
        assert_eq!(s.probs(&req("T", "other")).unwrap(), vec![0.2, 0.2, 0.6]);
    }

    #[test]
    fn heuristic_sums_to_one() {
        for c in ["You're welcome!", "Sounds fun.", &"word ".repeat(30)] {
            let p = HeuristicChoiceScorer.probs(&req("T", c)).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert_eq!(HeuristicChoiceScorer.probs(&req("T", "You're welcome!")).unwrap()[0], 0.6);
    }
}
