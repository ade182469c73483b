//! Bad-pattern rules.
//!
//! Rule files hold one rule per line: `name type body`, where `type` is one
//! of `regex`, `token` (comma-separated words or phrases matched on token
//! boundaries), `max_tokens` (integer) or `non_ascii_ratio` (number).
//! Blank lines and lines starting with `#` are ignored.

use regex::Regex;
use thiserror::Error;

use crate::text::tokenize;

#[derive(Debug, Clone)]
pub enum PatternKind {
    Regex(Regex),
    /// Each phrase is a token sequence that must appear contiguously.
    Tokens(Vec<Vec<String>>),
    MaxTokens(usize),
    NonAsciiRatio(f64),
}

#[derive(Debug, Clone)]
pub struct BadPattern {
    pub name: String,
    pub kind: PatternKind,
}

impl BadPattern {
    pub fn matches(&self, text: &str) -> bool {
        match &self.kind {
            PatternKind::Regex(re) => re.is_match(text),
            PatternKind::Tokens(phrases) => {
                let tokens = tokenize(text);
                phrases.iter().any(|p| !p.is_empty() && tokens.windows(p.len()).any(|w| w == p.as_slice()))
            }
            PatternKind::MaxTokens(limit) => tokenize(text).len() > *limit,
            PatternKind::NonAsciiRatio(limit) => {
                let (mut total, mut non_ascii) = (0usize, 0usize);
                for c in text.chars().filter(|c| !c.is_whitespace()) {
                    total += 1;
                    non_ascii += usize::from(!c.is_ascii());
                }
                total > 0 && non_ascii as f64 / total as f64 > *limit
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("bad pattern rule on line {line}: {message}")]
pub struct PatternError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct PatternSet {
    rules: Vec<BadPattern>,
}

pub const DEFAULT_RULES: &str = r#"# name            type             body
url               regex            (?i)\b(?:https?://|www\.)\S+
email             regex            (?i)\b[a-z0-9._%+-]+@[a-z0-9.-]+\.[a-z]{2,}\b
phone             regex            (?:\+?\d{1,2}[\s.-]?)?(?:\(\d{3}\)\s?|\b\d{3}[\s.-])\d{3}[\s.-]\d{4}\b
physical_action   regex            (?i)\bI(?:'ll|'d|'m going to| will| can| could| would| am going to)?\s+(?:drive|meet|walk|carry|deliver|cook|pick you up|drop you off|give you a ride)\b
physical_action   regex            (?i)\bI(?: haven't| have not)\s+arrived\b
profanity         token            damn, shit, fuck, fucking, bitch, bastard, crap, idiot, stupid, moron
too_long          max_tokens       30
non_ascii         non_ascii_ratio  0.3
"#;

impl Default for PatternSet {
    fn default() -> Self {
        Self::parse(DEFAULT_RULES).expect("default rules parse")
    }
}

impl PatternSet {
    pub fn new(rules: Vec<BadPattern>) -> Self {
        Self { rules }
    }

    pub fn parse(source: &str) -> Result<Self, PatternError> {
        let mut rules = Vec::new();
        for (i, raw) in source.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PatternError { line: i + 1, message };
            let mut parts = line.splitn(2, char::is_whitespace);
            let name = parts.next().unwrap_or_default().to_string();
            let rest = parts.next().unwrap_or_default().trim_start();
            let mut parts = rest.splitn(2, char::is_whitespace);
            let kind_name = parts.next().unwrap_or_default();
            let body = parts.next().unwrap_or_default().trim();
            if body.is_empty() {
                return Err(err("expected `name type body`".into()));
            }
            let kind = match kind_name {
                "regex" => PatternKind::Regex(Regex::new(body).map_err(|e| err(e.to_string()))?),
                "token" => PatternKind::Tokens(
                    body.split(',').map(tokenize).filter(|p| !p.is_empty()).collect(),
                ),
                "max_tokens" => PatternKind::MaxTokens(body.parse().map_err(|e| err(format!("{e}")))?),
                "non_ascii_ratio" => PatternKind::NonAsciiRatio(body.parse().map_err(|e| err(format!("{e}")))?),
                other => return Err(err(format!("unknown rule type {other:?}"))),
            };
            rules.push(BadPattern { name, kind });
        }
        Ok(Self { rules })
    }

    pub fn rules(&self) -> &[BadPattern] {
        &self.rules
    }

    /// Names of all matching rules, in rule order, each name at most once.
    pub fn match_bad_patterns(&self, text: &str) -> Vec<String> {
        let mut hits: Vec<String> = Vec::new();
        for rule in &self.rules {
            if !hits.contains(&rule.name) && rule.matches(text) {
                hits.push(rule.name.clone());
            }
        }
        hits
    }
}

/// Match against the default rule set.
pub fn match_bad_patterns(text: &str) -> Vec<String> {
    use std::sync::OnceLock;
    static DEFAULT: OnceLock<PatternSet> = OnceLock::new();
    DEFAULT.get_or_init(PatternSet::default).match_bad_patterns(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn url_is_caught() {
        assert_eq!(match_bad_patterns("Check http://x.co now"), vec!["url"]);
        assert_eq!(match_bad_patterns("see www.example.org"), vec!["url"]);
    }

    #[test]
    fn appropriate_examples_pass() {
        for ok in [
            "I hear it's beautiful.",
            "I love penguins.",
            "They say it tastes like chicken.",
            "It's a Pop event starting at 6:30 pm.",
            "Sure, I can assist you.",
            "That sounds like a great trip!",
        ] {
            assert!(match_bad_patterns(ok).is_empty(), "{ok}");
        }
    }

    #[test]
    fn physical_actions() {
        assert_eq!(match_bad_patterns("I can drive you there."), vec!["physical_action"]);
        assert_eq!(match_bad_patterns("I'll meet you at the venue."), vec!["physical_action"]);
        assert_eq!(match_bad_patterns("I haven't arrived there yet."), vec!["physical_action"]);
    }

    #[test]
    fn contact_details() {
        assert_eq!(match_bad_patterns("Mail me at bob@example.com"), vec!["email"]);
        assert_eq!(match_bad_patterns("Call 555-123-4567 today"), vec!["phone"]);
        assert_eq!(match_bad_patterns("Call (555) 123-4567 today"), vec!["phone"]);
    }

    #[test]
    fn profanity_is_token_bounded() {
        assert_eq!(match_bad_patterns("The President is an idiot."), vec!["profanity"]);
        assert!(match_bad_patterns("Scrappy little place.").is_empty());
    }

    #[test]
    fn length_and_script_limits() {
        let long = "word ".repeat(31);
        assert_eq!(match_bad_patterns(&long), vec!["too_long"]);
        assert!(match_bad_patterns(&"word ".repeat(30)).is_empty());
        assert_eq!(match_bad_patterns("东京很漂亮 ok"), vec!["non_ascii"]);
    }

    #[test]
    fn rule_file_parsing() {
        let set = PatternSet::parse("# comment\n\nshout regex [A-Z]{5,}\ngreeting token hello there, howdy\n").unwrap();
        assert_eq!(set.rules().len(), 2);
        assert_eq!(set.match_bad_patterns("Well HELLO THERE"), vec!["shout", "greeting"]);
        assert_eq!(set.match_bad_patterns("hello"), Vec::<String>::new());
        assert_eq!(set.match_bad_patterns("howdy!"), vec!["greeting"]);
    }

    #[test]
    fn rule_file_errors_name_the_line() {
        assert_eq!(PatternSet::parse("a regex (\n").unwrap_err().line, 1);
        assert_eq!(PatternSet::parse("\nb glob *.txt\n").unwrap_err().line, 2);
        assert_eq!(PatternSet::parse("c regex").unwrap_err().line, 1);
    }
}
