use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::aggregate::LabeledCandidate;
use super::record::{Justification, Label};
use crate::text::{normalize, tokenize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryCount {
    pub name: String,
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_candidates: usize,
    pub n_unique: usize,
    pub vocab_size: usize,
    pub avg_length_tokens: f64,
    pub good: CategoryCount,
    /// social, useful, social & useful, other (good)
    pub good_breakdown: Vec<CategoryCount>,
    pub bad: CategoryCount,
    /// inappropriate, misleading, inappropriate & misleading, other (bad)
    pub bad_breakdown: Vec<CategoryCount>,
}

fn category(name: &str, count: usize, total: usize) -> CategoryCount {
    let percent = if total == 0 { 0.0 } else { 100.0 * count as f64 / total as f64 };
    CategoryCount { name: name.to_string(), count, percent }
}

pub fn corpus_stats(labeled: &[LabeledCandidate]) -> CorpusStats {
    let n = labeled.len();
    let mut unique = BTreeSet::new();
    let mut vocab = BTreeSet::new();
    let mut total_tokens = 0usize;
    // [first only, second only, both, neither] per label
    let mut good = [0usize; 4];
    let mut bad = [0usize; 4];

    for l in labeled {
        unique.insert(normalize(&l.candidate.text));
        let tokens = tokenize(&l.candidate.text);
        total_tokens += tokens.len();
        vocab.extend(tokens);

        let chosen = l.majority_justifications();
        let [first, second] = Justification::allowed_for(l.final_label);
        let slot = match (chosen.contains(&first), chosen.contains(&second)) {
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            (false, false) => 3,
        };
        match l.final_label {
            Label::Good => good[slot] += 1,
            Label::Bad => bad[slot] += 1,
        }
    }

    let n_good: usize = good.iter().sum();
    let n_bad: usize = bad.iter().sum();
    CorpusStats {
        n_candidates: n,
        n_unique: unique.len(),
        vocab_size: vocab.len(),
        avg_length_tokens: if n == 0 { 0.0 } else { total_tokens as f64 / n as f64 },
        good: category("good", n_good, n),
        good_breakdown: ["social", "useful", "social & useful", "other (good)"]
            .iter()
            .zip(good)
            .map(|(name, c)| category(name, c, n))
            .collect(),
        bad: category("bad", n_bad, n),
        bad_breakdown: ["inappropriate", "misleading", "inappropriate & misleading", "other (bad)"]
            .iter()
            .zip(bad)
            .map(|(name, c)| category(name, c, n))
            .collect(),
    }
}

impl CorpusStats {
    /// Two-column plain-text table.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let row = |s: &mut String, k: &str, v: String| {
            let _ = writeln!(s, "{k:<34}{v:>16}");
        };
        row(&mut s, "# of candidates", self.n_candidates.to_string());
        row(&mut s, "# of unique candidates", self.n_unique.to_string());
        row(&mut s, "vocabulary size", self.vocab_size.to_string());
        row(&mut s, "average length (in tokens)", format!("{:.1}", self.avg_length_tokens));
        for (head, parts) in [(&self.good, &self.good_breakdown), (&self.bad, &self.bad_breakdown)] {
            row(&mut s, &format!("# of {} candidates (%)", head.name), format!("{} ({:.1})", head.count, head.percent));
            for c in parts {
                row(&mut s, &format!("  - {}", c.name), format!("{} ({:.1})", c.count, c.percent));
            }
        }
        s
    }
}
