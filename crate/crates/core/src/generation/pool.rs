use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::backends::{DecodingParams, GenerationRequest, GeneratorBackend};
use super::{build_context, harvest, CandidateSource, ChitChatCandidate, GenerationError, GenerationMode};
use crate::backend::BackendError;
use crate::corpus::Dialogue;
use crate::text::normalize;

/// Candidates for one dialogue plus run-level frequency counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePool {
    pub dialogue_id: String,
    pub candidates: Vec<ChitChatCandidate>,
    /// Normalized text to occurrence count across the whole generation run,
    /// restricted to texts present in this pool.
    pub frequency: BTreeMap<String, u32>,
    /// Largest count of any text across the run.
    pub run_max_count: u32,
}

impl CandidatePool {
    pub fn count_of(&self, text: &str) -> u32 {
        self.frequency.get(&normalize(text)).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequestFailure {
    pub dialogue_id: String,
    pub turn_index: usize,
    pub mode: GenerationMode,
    pub backend: String,
    pub params: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationOptions {
    /// Upper bound on concurrently outstanding backend requests.
    pub max_in_flight: usize,
    /// Extra attempts for requests that fail with a transport error.
    pub transport_retries: usize,
}

impl Default for GenerationOptions {
    fn default() -> Self {
        Self { max_in_flight: 4, transport_retries: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationOutcome {
    pub pool: CandidatePool,
    pub failures: Vec<RequestFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRun {
    pub pools: Vec<CandidatePool>,
    pub failures: Vec<RequestFailure>,
}

struct Job<'a> {
    dialogue: &'a Dialogue,
    turn_index: usize,
    mode: GenerationMode,
    backend: usize,
    request: GenerationRequest,
}

/// Generate a pool for one dialogue; the run is this dialogue alone.
pub fn generate_pool(
    dialogue: &Dialogue,
    backends: &[&dyn GeneratorBackend],
    params_grid: &[DecodingParams],
    options: &GenerationOptions,
) -> Result<GenerationOutcome, GenerationError> {
    let mut run = generate_corpus_pools(std::slice::from_ref(dialogue), backends, params_grid, options)?;
    Ok(GenerationOutcome { pool: run.pools.remove(0), failures: run.failures })
}

/// Generate pools for every dialogue, counting frequencies over the whole run.
///
/// Requests run concurrently up to `options.max_in_flight`; results are
/// folded in request order so the output does not depend on scheduling.
pub fn generate_corpus_pools(
    dialogues: &[Dialogue],
    backends: &[&dyn GeneratorBackend],
    params_grid: &[DecodingParams],
    options: &GenerationOptions,
) -> Result<GenerationRun, GenerationError> {
    if backends.is_empty() {
        return Err(GenerationError::NoBackends);
    }
    if options.max_in_flight == 0 {
        return Err(GenerationError::InvalidOptions("max_in_flight must be at least 1".into()));
    }
    let default_params = [DecodingParams::default()];
    let params_grid = if params_grid.is_empty() { &default_params[..] } else { params_grid };

    let mut jobs = Vec::new();
    for dialogue in dialogues {
        for ordinal in 1..=dialogue.num_system_turns() {
            let turn_index = dialogue.system_turn(ordinal).expect("ordinal in range").index;
            for mode in GenerationMode::ALL {
                let context = build_context(dialogue, ordinal, mode)?;
                for backend in 0..backends.len() {
                    for params in params_grid {
                        jobs.push(Job {
                            dialogue,
                            turn_index,
                            mode,
                            backend,
                            request: GenerationRequest { context: context.clone(), mode, params: params.clone() },
                        });
                    }
                }
            }
        }
    }

    let results = run_bounded(&jobs, backends, options);

    let mut failures = Vec::new();
    let mut run_frequency: BTreeMap<String, u32> = BTreeMap::new();
    let mut per_dialogue: BTreeMap<&str, BTreeMap<String, ChitChatCandidate>> =
        dialogues.iter().map(|d| (d.id.as_str(), BTreeMap::new())).collect();

    for (job, result) in jobs.iter().zip(results) {
        let backend_id = backends[job.backend].id().to_string();
        let text = match result {
            Ok(text) => text,
            Err(e @ BackendError::Transport(_)) => {
                return Err(GenerationError::Transport { backend: backend_id, source: e });
            }
            Err(e) => {
                failures.push(RequestFailure {
                    dialogue_id: job.dialogue.id.clone(),
                    turn_index: job.turn_index,
                    mode: job.mode,
                    backend: backend_id,
                    params: job.request.params.id(),
                    error: e.to_string(),
                });
                continue;
            }
        };
        let source = CandidateSource { backend: backend_id, params: job.request.params.id() };
        let harvested = harvest(&text, job.mode);
        let ids: Vec<String> = harvested
            .iter()
            .map(|h| ChitChatCandidate::make_id(&job.dialogue.id, job.turn_index, h.position, &h.text))
            .collect();
        let pool = per_dialogue.get_mut(job.dialogue.id.as_str()).expect("dialogue registered");
        for (h, id) in harvested.iter().zip(&ids) {
            *run_frequency.entry(normalize(&h.text)).or_default() += 1;
            pool.entry(id.clone()).or_insert_with(|| ChitChatCandidate {
                id: id.clone(),
                dialogue_id: job.dialogue.id.clone(),
                turn_index: job.turn_index,
                text: h.text.clone(),
                position: h.position,
                source: source.clone(),
                parent_id: h.split_from.map(|p| ids[p].clone()),
            });
        }
    }

    let run_max_count = run_frequency.values().copied().max().unwrap_or(0);
    let pools = dialogues
        .iter()
        .map(|d| {
            let mut candidates: Vec<ChitChatCandidate> =
                per_dialogue.remove(d.id.as_str()).unwrap_or_default().into_values().collect();
            candidates.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
            let texts: BTreeSet<String> = candidates.iter().map(|c| normalize(&c.text)).collect();
            let frequency = texts.into_iter().map(|t| {
                let n = run_frequency[&t];
                (t, n)
            });
            CandidatePool {
                dialogue_id: d.id.clone(),
                candidates,
                frequency: frequency.collect(),
                run_max_count,
            }
        })
        .collect();
    Ok(GenerationRun { pools, failures })
}

fn run_bounded(
    jobs: &[Job<'_>],
    backends: &[&dyn GeneratorBackend],
    options: &GenerationOptions,
) -> Vec<Result<String, BackendError>> {
    let slots: Vec<Mutex<Option<Result<String, BackendError>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = options.max_in_flight.min(jobs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let backend = backends[job.backend];
                let mut result = backend.generate(&job.request);
                let mut attempts = 0;
                while matches!(result, Err(BackendError::Transport(_))) && attempts < options.transport_retries {
                    attempts += 1;
                    tracing::debug!(backend = backend.id(), attempts, "retrying generation request");
                    result = backend.generate(&job.request);
                }
                *slots[i].lock().expect("slot lock") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().expect("slot lock").expect("every job ran"))
        .collect()
}
