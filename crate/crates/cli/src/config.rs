//! Run configuration: TOML file, then command-line flags, then environment.

use std::path::Path;

use anyhow::{Context, Result};
use chitchat_core::codec::Flavor;
use chitchat_core::generation::DecodingParams;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Weights {
    pub frequency: f64,
    pub diversity: f64,
    pub response: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self { frequency: 0.3, diversity: 0.3, response: 0.2 }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub generator_urls: Vec<String>,
    pub scorer_url: Option<String>,
    pub arranger_scorer_url: Option<String>,
    pub k: Option<usize>,
    pub per_turn: bool,
    pub batch_size: Option<usize>,
    pub flavor: Option<String>,
    pub max_injection_frequency: Option<f64>,
    pub max_in_flight: Option<usize>,
    pub weights: Weights,
    pub decoding: Vec<DecodingParams>,
    pub patterns: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let raw = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&raw).with_context(|| format!("parsing config {}", path.display()))
    }
}

fn env_var(name: &str) -> Option<String> {
    std::env::var(name).ok().filter(|v| !v.trim().is_empty())
}

fn split_urls(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|u| !u.is_empty()).map(String::from).collect()
}

/// Environment over flag over config.
pub fn generator_urls(flag: Option<&str>, config: &Config) -> Vec<String> {
    if let Some(v) = env_var("GENERATOR_URLS") {
        return split_urls(&v);
    }
    match flag {
        Some(f) => split_urls(f),
        None => config.generator_urls.clone(),
    }
}

pub fn scorer_url(flag: Option<&str>, config: &Config) -> Option<String> {
    env_var("SCORER_URL").or_else(|| flag.map(String::from)).or_else(|| config.scorer_url.clone())
}

pub fn arranger_scorer_url(flag: Option<&str>, config: &Config) -> Option<String> {
    env_var("ARRANGER_SCORER_URL").or_else(|| flag.map(String::from)).or_else(|| config.arranger_scorer_url.clone())
}

pub fn seed(flag: Option<u64>, config: &Config) -> u64 {
    flag.or(config.seed).unwrap_or(0)
}

pub fn flavor(flag: Option<&str>, config: &Config) -> Result<Flavor> {
    let raw = flag.or(config.flavor.as_deref()).unwrap_or("simpletod");
    raw.parse().map_err(|e: String| anyhow::anyhow!(e))
}
