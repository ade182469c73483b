use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::GenerationMode;
use crate::backend::{BackendError, ContextTurn, JsonClient};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodingParams {
    pub max_new_tokens: u32,
    pub temperature: f64,
    pub top_p: f64,
    pub seed: u64,
}

impl Default for DecodingParams {
    fn default() -> Self {
        Self { max_new_tokens: 40, temperature: 0.7, top_p: 0.9, seed: 0 }
    }
}

impl DecodingParams {
    /// Short stable identifier recorded as candidate provenance.
    pub fn id(&self) -> String {
        format!("n{}-t{}-p{}-s{}", self.max_new_tokens, self.temperature, self.top_p, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub context: Vec<ContextTurn>,
    pub mode: GenerationMode,
    pub params: DecodingParams,
}

/// Backend reply: `{"text": ...}` or `{"error": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenerationResponse {
    Text { text: String },
    Error { error: String },
}

pub trait GeneratorBackend: Send + Sync {
    fn id(&self) -> &str;
    fn generate(&self, request: &GenerationRequest) -> Result<String, BackendError>;
}

/// Remote generator speaking the JSON wire protocol.
#[derive(Debug, Clone)]
pub struct HttpGenerator {
    client: JsonClient,
}

impl HttpGenerator {
    pub fn new(url: impl Into<String>) -> Self {
        Self { client: JsonClient::new(url) }
    }

    pub fn from_client(client: JsonClient) -> Self {
        Self { client }
    }
}

impl GeneratorBackend for HttpGenerator {
    fn id(&self) -> &str {
        self.client.url()
    }

    fn generate(&self, request: &GenerationRequest) -> Result<String, BackendError> {
        match self.client.post(request)? {
            GenerationResponse::Text { text } => Ok(text),
            GenerationResponse::Error { error } => Err(BackendError::Rejected { status: 200, message: error }),
        }
    }
}

/// Always returns the same text.
#[derive(Debug, Clone)]
pub struct ConstantGenerator {
    id: String,
    text: String,
}

impl ConstantGenerator {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into() }
    }
}

impl GeneratorBackend for ConstantGenerator {
    fn id(&self) -> &str {
        &self.id
    }

    fn generate(&self, _request: &GenerationRequest) -> Result<String, BackendError> {
        Ok(self.text.clone())
    }
}

/// Looks up `(mode, last context utterance)`; unknown keys are rejected.
#[derive(Debug, Clone, Default)]
pub struct TableGenerator {
    id: String,
    table: HashMap<(GenerationMode, String), String>,
}

impl TableGenerator {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), table: HashMap::new() }
    }

    pub fn with(mut self, mode: GenerationMode, last_utterance: impl Into<String>, text: impl Into<String>) -> Self {
        self.table.insert((mode, last_utterance.into()), text.into());
        self
    }
}

impl GeneratorBackend for TableGenerator {
    fn id(&self) -> &str {
        &self.id
    }

    fn generate(&self, request: &GenerationRequest) -> Result<String, BackendError> {
        let last = request.context.last().map(|t| t.utterance.clone()).unwrap_or_default();
        self.table
            .get(&(request.mode, last))
            .cloned()
            .ok_or_else(|| BackendError::Rejected { status: 404, message: "no scripted response".into() })
    }
}

const APPEND_TEMPLATES: &[&str] = &[
    "Enjoy your day!",
    "I hear it's beautiful there.",
    "That sounds like a great plan. I hope you have fun!",
    "You're welcome.",
    "It's a great way to kick off the summer.",
    "They say the food there is really good.",
    "Check http://example.com for more details.",
    "I can drive you there myself.",
];

const PREPEND_TEMPLATES: &[&str] = &[
    "Sure thing.",
    "Great choice!",
    "You're welcome.",
    "That sounds like fun. Let me see.",
    "I love that place.",
    "Happy to help!",
    "No problem at all.",
    "Call me at 555-123-4567 anytime.",
];

/// Deterministic built-in generator: picks from a fixed template table by
/// hashing the backend id, mode, decoding seed and last context utterance.
#[derive(Debug, Clone)]
pub struct TemplateGenerator {
    id: String,
}

impl TemplateGenerator {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into() }
    }
}

impl GeneratorBackend for TemplateGenerator {
    fn id(&self) -> &str {
        &self.id
    }

    fn generate(&self, request: &GenerationRequest) -> Result<String, BackendError> {
        let table = match request.mode {
            GenerationMode::Continue => APPEND_TEMPLATES,
            GenerationMode::NewTurn => PREPEND_TEMPLATES,
        };
        let mut h = Sha256::new();
        h.update(self.id.as_bytes());
        h.update([request.mode as u8]);
        h.update(request.params.seed.to_le_bytes());
        if let Some(last) = request.context.last() {
            h.update(last.utterance.as_bytes());
        }
        let digest = h.finalize();
        let pick = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes")) as usize % table.len();
        Ok(table[pick].to_string())
    }
}
