use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::multiwoz::MwozDialogue;
use super::sgd::SgdDialogue;
use super::{validate_dialogue, CorpusError, Dialogue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    /// JSON array of SGD dialogue records.
    Sgd,
    /// MultiWOZ 2.1 `data.json` object keyed by dialogue id.
    #[serde(rename = "multiwoz21")]
    MultiWoz21,
    /// Line-delimited canonical dialogues, one per line.
    Canonical,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sgd" => Ok(Self::Sgd),
            "multiwoz" | "multiwoz21" | "multiwoz2.1" => Ok(Self::MultiWoz21),
            "canonical" | "jsonl" => Ok(Self::Canonical),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// Parse a corpus file and check every dialogue invariant.
///
/// The first violation found is returned as [`CorpusError::Validation`].
pub fn ingest_corpus(raw: &[u8], format: CorpusFormat) -> Result<Vec<Dialogue>, CorpusError> {
    let dialogues = match format {
        CorpusFormat::Sgd => {
            let records: Vec<SgdDialogue> = serde_json::from_slice(raw).map_err(|e| json_error(raw, 0, &e))?;
            records.into_iter().map(SgdDialogue::into_dialogue).collect()
        }
        CorpusFormat::MultiWoz21 => {
            let records: BTreeMap<String, MwozDialogue> =
                serde_json::from_slice(raw).map_err(|e| json_error(raw, 0, &e))?;
            records
                .into_iter()
                .map(|(id, d)| d.into_dialogue(id.trim_end_matches(".json").to_string()))
                .collect()
        }
        CorpusFormat::Canonical => from_canonical_jsonl(raw)?,
    };
    for d in &dialogues {
        if let Some(v) = validate_dialogue(d).into_iter().next() {
            return Err(CorpusError::Validation(v));
        }
    }
    Ok(dialogues)
}

/// Read line-delimited canonical dialogues. Blank lines and lines holding an
/// artifact header object (`{"header": ...}`) are skipped.
pub fn from_canonical_jsonl(raw: &[u8]) -> Result<Vec<Dialogue>, CorpusError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in raw.split_inclusive(|&b| b == b'\n') {
        let body = line.strip_suffix(b"\n").unwrap_or(line);
        if !body.iter().all(u8::is_ascii_whitespace) && !is_header_line(body) {
            out.push(serde_json::from_slice(body).map_err(|e| json_error(body, offset, &e))?);
        }
        offset += line.len();
    }
    Ok(out)
}

fn is_header_line(line: &[u8]) -> bool {
    line.starts_with(br#"{"header":"#)
}

pub fn to_canonical_jsonl(dialogues: &[Dialogue]) -> Vec<u8> {
    let mut out = Vec::new();
    for d in dialogues {
        serde_json::to_writer(&mut out, d).expect("dialogue serializes");
        out.push(b'\n');
    }
    out
}

/// Serialize back into the SGD layout accepted by [`ingest_corpus`].
pub fn to_sgd_json(dialogues: &[Dialogue]) -> Vec<u8> {
    let records: Vec<SgdDialogue> = dialogues.iter().map(SgdDialogue::from_dialogue).collect();
    serde_json::to_vec_pretty(&records).expect("dialogue serializes")
}

fn json_error(raw: &[u8], base: usize, e: &serde_json::Error) -> CorpusError {
    CorpusError::Parse { offset: base + byte_offset(raw, e.line(), e.column()), message: e.to_string() }
}

// serde_json reports 1-based line and column; column 0 means "before the line".
fn byte_offset(raw: &[u8], line: usize, column: usize) -> usize {
    let line_start: usize = raw
        .split_inclusive(|&b| b == b'\n')
        .take(line.saturating_sub(1))
        .map(<[u8]>::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(raw.len())
}
