//! Append-only record log with last-write-wins state.
//!
//! Every accepted annotation or judgment becomes one JSON line. The in-memory
//! state is a pure function of the log: later lines replace earlier ones for
//! the same (candidate, annotator) or (task, judge) key.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    aggregate, corpus_stats, fleiss_kappa, AnnotationError, AnnotationRecord, AnnotationTask, CorpusStats, KappaError,
    KappaReport, Label, LabeledCandidate,
};
use crate::acute::{ComparisonResult, ComparisonTask, ComparisonView};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogEntry {
    Annotation(AnnotationRecord),
    Judgment(ComparisonResult),
}

/// Resolved store state, written out as a compacted snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub log_entries: usize,
    pub annotations: Vec<AnnotationRecord>,
    pub judgments: Vec<ComparisonResult>,
}

pub struct AnnotationStore {
    tasks: Vec<AnnotationTask>,
    task_index: HashMap<String, usize>,
    comparisons: Vec<ComparisonTask>,
    comparison_index: HashMap<String, usize>,
    /// Tasks with this many distinct annotators stop being served; 0 means never.
    target_ratings: usize,
    judgments_per_task: usize,
    log: Vec<LogEntry>,
    annotations: BTreeMap<(String, String), AnnotationRecord>,
    judgments: BTreeMap<(String, String), ComparisonResult>,
    sink: Option<File>,
}

impl AnnotationStore {
    /// In-memory store without a backing file.
    pub fn new(tasks: Vec<AnnotationTask>, comparisons: Vec<ComparisonTask>) -> Self {
        let task_index = tasks.iter().enumerate().map(|(i, t)| (t.candidate.id.clone(), i)).collect();
        let comparison_index = comparisons.iter().enumerate().map(|(i, t)| (t.id.clone(), i)).collect();
        Self {
            tasks,
            task_index,
            comparisons,
            comparison_index,
            target_ratings: 0,
            judgments_per_task: 1,
            log: Vec::new(),
            annotations: BTreeMap::new(),
            judgments: BTreeMap::new(),
            sink: None,
        }
    }

    pub fn with_target_ratings(mut self, n: usize) -> Self {
        self.target_ratings = n;
        self
    }

    pub fn with_judgments_per_task(mut self, n: usize) -> Self {
        self.judgments_per_task = n;
        self
    }

    /// Replay `raw` log lines onto a fresh store.
    pub fn replay(
        tasks: Vec<AnnotationTask>,
        comparisons: Vec<ComparisonTask>,
        raw: &[u8],
    ) -> Result<Self, AnnotationError> {
        let mut store = Self::new(tasks, comparisons);
        for (i, line) in raw.split(|&b| b == b'\n').enumerate() {
            if line.iter().all(u8::is_ascii_whitespace) || line.starts_with(br#"{"header":"#) {
                continue;
            }
            let corrupt = |message: String| AnnotationError::CorruptLog { line: i + 1, message };
            let entry: LogEntry = serde_json::from_slice(line).map_err(|e| corrupt(e.to_string()))?;
            store.apply(entry).map_err(|e| corrupt(e.to_string()))?;
        }
        Ok(store)
    }

    /// Replay an existing log file (if any) and append to it from now on.
    pub fn open(
        tasks: Vec<AnnotationTask>,
        comparisons: Vec<ComparisonTask>,
        log_path: &Path,
    ) -> Result<Self, AnnotationError> {
        let raw = match std::fs::read(log_path) {
            Ok(raw) => raw,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        let mut store = Self::replay(tasks, comparisons, &raw)?;
        let mut sink = OpenOptions::new().create(true).append(true).open(log_path)?;
        if !raw.is_empty() && !raw.ends_with(b"\n") {
            sink.write_all(b"\n")?;
        }
        store.sink = Some(sink);
        Ok(store)
    }

    fn check(&self, entry: &LogEntry) -> Result<(), AnnotationError> {
        match entry {
            LogEntry::Annotation(r) => {
                r.validate()?;
                if !self.task_index.contains_key(&r.candidate_id) {
                    return Err(AnnotationError::UnknownCandidate(r.candidate_id.clone()));
                }
            }
            LogEntry::Judgment(j) => {
                if !self.comparison_index.contains_key(&j.task_id) {
                    return Err(AnnotationError::UnknownTask(j.task_id.clone()));
                }
            }
        }
        Ok(())
    }

    fn apply(&mut self, entry: LogEntry) -> Result<(), AnnotationError> {
        self.check(&entry)?;
        match &entry {
            LogEntry::Annotation(r) => {
                self.annotations.insert((r.candidate_id.clone(), r.annotator_id.clone()), r.clone());
            }
            LogEntry::Judgment(j) => {
                self.judgments.insert((j.task_id.clone(), j.judge_id.clone()), j.clone());
            }
        }
        self.log.push(entry);
        Ok(())
    }

    fn append(&mut self, entry: LogEntry) -> Result<(), AnnotationError> {
        self.check(&entry)?;
        if let Some(sink) = self.sink.as_mut() {
            let mut line = serde_json::to_vec(&entry).expect("log entry serializes");
            line.push(b'\n');
            sink.write_all(&line)?;
            sink.flush()?;
        }
        self.apply(entry)
    }

    pub fn record_annotation(&mut self, record: AnnotationRecord) -> Result<(), AnnotationError> {
        self.append(LogEntry::Annotation(record))
    }

    pub fn record_judgment(&mut self, result: ComparisonResult) -> Result<(), AnnotationError> {
        self.append(LogEntry::Judgment(result))
    }

    pub fn tasks(&self) -> &[AnnotationTask] {
        &self.tasks
    }

    pub fn comparisons(&self) -> &[ComparisonTask] {
        &self.comparisons
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    fn ratings_of<'a>(&'a self, candidate_id: &'a str) -> impl Iterator<Item = &'a AnnotationRecord> + 'a {
        self.annotations
            .range((candidate_id.to_string(), String::new())..)
            .take_while(move |((c, _), _)| c == candidate_id)
            .map(|(_, r)| r)
    }

    /// Up to `n` tasks, in export order, that `annotator` has not labeled yet.
    pub fn next_tasks(&self, annotator: &str, n: usize) -> Vec<&AnnotationTask> {
        self.tasks
            .iter()
            .filter(|t| {
                let id = &t.candidate.id;
                !self.annotations.contains_key(&(id.clone(), annotator.to_string()))
                    && (self.target_ratings == 0 || self.ratings_of(id).count() < self.target_ratings)
            })
            .take(n)
            .collect()
    }

    /// Up to `n` comparison tasks `judge` has not judged and that still need judgments.
    pub fn next_comparisons(&self, judge: &str, n: usize) -> Vec<ComparisonView> {
        let mut per_task: HashMap<&str, usize> = HashMap::new();
        for (task, _) in self.judgments.keys() {
            *per_task.entry(task.as_str()).or_default() += 1;
        }
        self.comparisons
            .iter()
            .filter(|t| {
                !self.judgments.contains_key(&(t.id.clone(), judge.to_string()))
                    && per_task.get(t.id.as_str()).copied().unwrap_or(0) < self.judgments_per_task
            })
            .take(n)
            .map(ComparisonTask::judge_view)
            .collect()
    }

    /// Current records per candidate, ordered by annotator id.
    pub fn records_by_candidate(&self) -> BTreeMap<String, Vec<AnnotationRecord>> {
        let mut out: BTreeMap<String, Vec<AnnotationRecord>> = BTreeMap::new();
        for ((candidate, _), r) in &self.annotations {
            out.entry(candidate.clone()).or_default().push(r.clone());
        }
        out
    }

    /// Aggregated labels for every candidate with at least one record, in export order.
    pub fn labeled_candidates(&self) -> Vec<LabeledCandidate> {
        let mut by_candidate = self.records_by_candidate();
        self.tasks
            .iter()
            .filter_map(|t| {
                let records = by_candidate.remove(&t.candidate.id)?;
                aggregate(t.candidate.clone(), records)
            })
            .collect()
    }

    /// Agreement over candidates; ratings are taken in submission-time order.
    pub fn kappa_report<T: Field>(&self, raters_per_item: Option<usize>) -> Result<KappaReport<T>, KappaError> {
        let ratings: BTreeMap<String, Vec<Label>> = self
            .records_by_candidate()
            .into_iter()
            .map(|(c, mut records)| {
                records.sort_by(|a, b| (a.timestamp, &a.annotator_id).cmp(&(b.timestamp, &b.annotator_id)));
                (c, records.into_iter().map(|r| r.label).collect())
            })
            .collect();
        fleiss_kappa(&ratings, raters_per_item)
    }

    pub fn stats(&self) -> CorpusStats {
        corpus_stats(&self.labeled_candidates())
    }

    /// Current judgments ordered by (task, judge).
    pub fn judgments(&self) -> Vec<ComparisonResult> {
        self.judgments.values().cloned().collect()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            log_entries: self.log.len(),
            annotations: self.annotations.values().cloned().collect(),
            judgments: self.judgments(),
        }
    }

    pub fn write_snapshot(&self, path: &Path) -> Result<(), AnnotationError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(&self.snapshot()).expect("snapshot serializes"))?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}
