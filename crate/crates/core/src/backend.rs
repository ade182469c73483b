//! Plumbing shared by the external model backends (generator, filter scorer,
//! arrangement scorer): the error type and a blocking JSON-over-HTTP helper.

use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Speaker;

/// One `{speaker, utterance}` element of a context sent to a backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextTurn {
    pub speaker: Speaker,
    pub utterance: String,
}

impl ContextTurn {
    pub fn new(speaker: Speaker, utterance: impl Into<String>) -> Self {
        Self { speaker, utterance: utterance.into() }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BackendError {
    /// Connection failures, timeouts and 5xx responses. Worth retrying.
    #[error("transport error: {0}")]
    Transport(String),
    /// 4xx responses; the request itself is at fault.
    #[error("request rejected with status {status}: {message}")]
    Rejected { status: u16, message: String },
    /// The backend answered with something outside the protocol.
    #[error("protocol error: {0}")]
    Protocol(String),
}

impl BackendError {
    pub fn is_retriable(&self) -> bool {
        matches!(self, BackendError::Transport(_))
    }
}

/// Blocking JSON client used by every HTTP backend.
#[derive(Debug, Clone)]
pub struct JsonClient {
    url: String,
    http: reqwest::blocking::Client,
}

impl JsonClient {
    pub fn new(url: impl Into<String>) -> Self {
        Self::with_timeout(url, Duration::from_secs(60))
    }

    pub fn with_timeout(url: impl Into<String>, timeout: Duration) -> Self {
        let http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .expect("http client builds");
        Self { url: url.into(), http }
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn post<Req: Serialize, Resp: DeserializeOwned>(&self, body: &Req) -> Result<Resp, BackendError> {
        let response = self
            .http
            .post(&self.url)
            .json(body)
            .send()
            .map_err(|e| BackendError::Transport(format!("{}: {e}", self.url)))?;
        let status = response.status();
        if status.is_client_error() {
            let message = response.text().unwrap_or_default();
            return Err(BackendError::Rejected { status: status.as_u16(), message });
        }
        if !status.is_success() {
            return Err(BackendError::Transport(format!("{}: status {status}", self.url)));
        }
        let bytes = response.bytes().map_err(|e| BackendError::Transport(e.to_string()))?;
        serde_json::from_slice(&bytes).map_err(|e| BackendError::Protocol(format!("{}: {e}", self.url)))
    }
}

/// Split a comma-separated endpoint list, dropping empty entries.
pub fn parse_url_list(list: &str) -> Vec<String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn url_list() {
        assert_eq!(parse_url_list(" http://a:1/gen, ,http://b:2/gen "), vec!["http://a:1/gen", "http://b:2/gen"]);
        assert!(parse_url_list("").is_empty());
    }

    #[test]
    fn unreachable_endpoint_is_transport_error() {
        let client = JsonClient::with_timeout("http://127.0.0.1:1/generate", Duration::from_secs(2));
        let err = client.post::<_, serde_json::Value>(&serde_json::json!({})).unwrap_err();
        assert!(err.is_retriable(), "{err:?}");
    }
}
