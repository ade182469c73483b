use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::backend::{BackendError, ContextTurn, JsonClient};
use crate::generation::Position;
use crate::text::{content_tokens, normalize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub context: Vec<ContextTurn>,
    pub candidate: String,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub posterior: f64,
}

/// Candidate quality classifier: probability that the augmentation is good.
pub trait CandidateScorer: Send + Sync {
    fn posterior(&self, request: &ScoreRequest) -> Result<f64, BackendError>;
}

#[derive(Debug, Clone)]
pub struct HttpScorer {
    client: JsonClient,
}

impl HttpScorer {
    pub fn new(url: impl Into<String>) -> Self {
        Self { client: JsonClient::new(url) }
    }
}

impl CandidateScorer for HttpScorer {
    fn posterior(&self, request: &ScoreRequest) -> Result<f64, BackendError> {
        let response: ScoreResponse = self.client.post(request)?;
        Ok(response.posterior)
    }
}

/// Deterministic length-based stand-in for the classifier: short
/// conversational add-ons of six to ten words score highest.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicScorer;

impl CandidateScorer for HeuristicScorer {
    fn posterior(&self, request: &ScoreRequest) -> Result<f64, BackendError> {
        let n = content_tokens(&request.candidate).len() as f64;
        let shape = (-(n - 8.0).powi(2) / 32.0).exp();
        let question = if request.candidate.trim_end().ends_with('?') { 0.05 } else { 0.0 };
        Ok((0.15 + 0.75 * shape + question).clamp(0.0, 1.0))
    }
}

/// Fixed posterior per normalized candidate text.
#[derive(Debug, Clone, Default)]
pub struct TableScorer {
    table: HashMap<String, f64>,
    default: f64,
}

impl TableScorer {
    pub fn new(default: f64) -> Self {
        Self { table: HashMap::new(), default }
    }

    pub fn with(mut self, text: &str, posterior: f64) -> Self {
        self.table.insert(normalize(text), posterior);
        self
    }
}

impl CandidateScorer for TableScorer {
    fn posterior(&self, request: &ScoreRequest) -> Result<f64, BackendError> {
        Ok(self.table.get(&normalize(&request.candidate)).copied().unwrap_or(self.default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(text: &str) -> ScoreRequest {
        ScoreRequest { context: vec![], candidate: text.into(), position: Position::Append }
    }

    #[test]
    fn heuristic_prefers_mid_length() {
        let s = HeuristicScorer;
        let short = s.posterior(&req("Ok.")).unwrap();
        let mid = s.posterior(&req("It's a great way to kick off the summer.")).unwrap();
        let long = s.posterior(&req(&"very ".repeat(25))).unwrap();
        assert!(mid > short && mid > long);
        for p in [short, mid, long] {
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn wire_format() {
        let v = serde_json::to_value(req("Enjoy!")).unwrap();
        assert_eq!(v["position"], "append");
        assert_eq!(v["candidate"], "Enjoy!");
    }
}
