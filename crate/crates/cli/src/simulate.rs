//! Seeded stand-ins for crowd annotators and pairwise judges.

use chitchat_core::acute::{ComparisonResult, ComparisonTask, Side};
use chitchat_core::annotation::{AnnotationRecord, AnnotationStore, Justification, Label};
use chitchat_core::backend::ContextTurn;
use chitchat_core::corpus::Speaker;
use chitchat_core::filter::{CandidateScorer, HeuristicScorer, ScoreRequest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every annotator labels every task once. An annotator calls a candidate
/// good with probability equal to the heuristic posterior, shifted by a
/// per-annotator leniency.
pub fn annotate(store: &mut AnnotationStore, annotators: usize, seed: u64) -> anyhow::Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leniency: Vec<f64> = (0..annotators).map(|_| rng.random_range(-0.1..0.1)).collect();
    let work: Vec<(String, f64)> = store
        .tasks()
        .iter()
        .map(|t| {
            let request = ScoreRequest { context: t.context.clone(), candidate: t.candidate.text.clone(), position: t.position };
            let p = HeuristicScorer.posterior(&request).expect("heuristic scorer is infallible");
            (t.candidate.id.clone(), p)
        })
        .collect();
    let mut clock = 0;
    for (candidate_id, p) in work {
        for (a, shift) in leniency.iter().enumerate() {
            clock += 1;
            let label = if rng.random::<f64>() < (p + shift).clamp(0.0, 1.0) { Label::Good } else { Label::Bad };
            let allowed = Justification::allowed_for(label);
            let mut record = AnnotationRecord::new(&candidate_id, format!("sim-annotator-{a}"), label)
                .with(allowed[rng.random_range(0..allowed.len())]);
            record.timestamp = clock;
            store.record_annotation(record)?;
        }
    }
    Ok(clock as usize)
}

fn system_words(side: &[ContextTurn]) -> usize {
    side.iter().filter(|t| t.speaker == Speaker::System).map(|t| t.utterance.split_whitespace().count()).sum()
}

/// Judges lean toward the transcript with more system-side words.
pub fn judge(store: &mut AnnotationStore, judges: usize, seed: u64) -> anyhow::Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tasks: Vec<ComparisonTask> = store.comparisons().to_vec();
    let mut clock = 0;
    for task in &tasks {
        let (l, r) = (system_words(&task.left), system_words(&task.right));
        let p_left = match l.cmp(&r) {
            std::cmp::Ordering::Greater => 0.7,
            std::cmp::Ordering::Less => 0.3,
            std::cmp::Ordering::Equal => 0.5,
        };
        for j in 0..judges {
            clock += 1;
            let winner = if rng.random::<f64>() < p_left { Side::Left } else { Side::Right };
            store.record_judgment(ComparisonResult {
                task_id: task.id.clone(),
                judge_id: format!("sim-judge-{j}"),
                winner,
                timestamp: clock,
            })?;
        }
    }
    Ok(clock as usize)
}
