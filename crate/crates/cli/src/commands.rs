use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use chitchat_core::acute::{self, Axis, ComparisonTask, GoodByTurn, SampleCriteria};
use chitchat_core::annotation::{self, AnnotationStore, AnnotationTask, LabeledCandidate, LogEntry, TaskBatch};
use chitchat_core::arranger::{ChoiceScorer, GatedArranger, HeuristicChoiceScorer, HttpChoiceScorer};
use chitchat_core::augment::{Augmentation, AugmentedDialogue};
use chitchat_core::backend::ContextTurn;
use chitchat_core::codec::expand_training_set;
use chitchat_core::corpus::{self, CorpusFormat, Dialogue};
use chitchat_core::filter::{rank_pool, CandidateScorer, HeuristicScorer, HttpScorer, PatternSet};
use chitchat_core::generation::{
    generate_corpus_pools, CandidatePool, DecodingParams, GenerationOptions, GeneratorBackend, HttpGenerator,
    TemplateGenerator,
};
use chitchat_core::metrics::{evaluate, FrequencyInterval, TurnPrediction};
use chitchat_core::{CellReport, EvalReport, KappaReport, RankConfig, RankedCandidate};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::artifact::{parse_records, write_artifact, DirLock, Inputs};
use crate::config::{self, Config};
use crate::{
    AcuteCommand, ArrangeArgs, Cli, Command, EvaluateArgs, ExportArgs, FilterArgs, GenerateArgs, IngestArgs,
    KappaArgs, SequenceArgs, ServeArgs, SimulateCommand, StoreArgs, StoreReportArgs, SynthArgs,
};

const DEFAULT_K: usize = 10;
const DEFAULT_BATCH: usize = 10;

struct Ctx {
    config: Config,
    seed: u64,
}

pub fn run(cli: Cli) -> Result<()> {
    let config = Config::load(cli.config.as_deref())?;
    let ctx = Ctx { seed: config::seed(cli.seed, &config), config };
    match cli.command {
        Command::Synth(a) => synth(&ctx, a),
        Command::Ingest(a) => ingest(&ctx, a),
        Command::Generate(a) => generate(&ctx, a),
        Command::Filter(a) => filter(&ctx, a),
        Command::ExportTasks(a) => export(&ctx, a),
        Command::Serve(a) => serve(a),
        Command::Simulate(s) => simulate_cmd(&ctx, s),
        Command::Stats(a) => stats(&ctx, a),
        Command::Kappa(a) => kappa(&ctx, a),
        Command::BuildSequences(a) => build_sequences(&ctx, a),
        Command::Arrange(a) => arrange(&ctx, a),
        Command::Evaluate(a) => evaluate_cmd(&ctx, a),
        Command::Acute(c) => acute_cmd(&ctx, c),
    }
}

/// One-line JSON error record for stderr.
pub fn error_record(e: &anyhow::Error) -> String {
    let kind = if e.downcast_ref::<corpus::CorpusError>().is_some() {
        "corpus"
    } else if e.downcast_ref::<chitchat_core::filter::FilterError>().is_some() {
        "filter"
    } else if e.downcast_ref::<chitchat_core::generation::GenerationError>().is_some() {
        "generation"
    } else if e.downcast_ref::<annotation::AnnotationError>().is_some() || e.downcast_ref::<annotation::KappaError>().is_some() {
        "annotation"
    } else if e.downcast_ref::<chitchat_core::codec::CodecError>().is_some() {
        "codec"
    } else if e.downcast_ref::<chitchat_core::arranger::ArrangerError>().is_some() {
        "arranger"
    } else if e.downcast_ref::<chitchat_core::metrics::MetricsError>().is_some() {
        "metrics"
    } else if e.downcast_ref::<acute::AcuteError>().is_some() {
        "acute"
    } else if e.downcast_ref::<std::io::Error>().is_some() {
        "io"
    } else {
        "error"
    };
    let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
    json!({ "error": { "kind": kind, "message": e.to_string(), "chain": chain } }).to_string()
}

fn load_corpus(inputs: &mut Inputs, path: &Path) -> Result<Vec<Dialogue>> {
    let raw = inputs.read(path)?;
    Ok(corpus::ingest_corpus(&raw, CorpusFormat::Canonical).with_context(|| format!("loading {}", path.display()))?)
}

fn load_tasks(inputs: &mut Inputs, path: Option<&Path>) -> Result<Vec<AnnotationTask>> {
    let Some(path) = path else { return Ok(Vec::new()) };
    let batches: Vec<TaskBatch> = inputs.read_records(path)?;
    Ok(batches.into_iter().flat_map(|b| b.tasks).collect())
}

fn load_store(inputs: &mut Inputs, args: &StoreArgs) -> Result<AnnotationStore> {
    let tasks = load_tasks(inputs, args.tasks.as_deref())?;
    let comparisons: Vec<ComparisonTask> = match &args.comparisons {
        Some(p) => inputs.read_records(p)?,
        None => Vec::new(),
    };
    let raw = match std::fs::read(&args.log) {
        Ok(raw) => raw,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => bail!("log {} does not exist", args.log.display()),
        Err(e) => return Err(e).with_context(|| format!("reading {}", args.log.display())),
    };
    inputs.read(&args.log)?;
    Ok(AnnotationStore::replay(tasks, comparisons, &raw)?)
}

fn labeled_from(inputs: &mut Inputs, args: &StoreArgs) -> Result<Vec<LabeledCandidate>> {
    Ok(load_store(inputs, args)?.labeled_candidates())
}

fn synth(ctx: &Ctx, a: SynthArgs) -> Result<()> {
    let _lock = DirLock::acquire(&a.out)?;
    let dialogues = corpus::synthetic_corpus(a.n, ctx.seed);
    let body = match a.format.as_str() {
        "sgd" => corpus::to_sgd_json(&dialogues),
        "canonical" => corpus::to_canonical_jsonl(&dialogues),
        other => bail!("synth writes sgd or canonical, not {other:?}"),
    };
    // raw corpus files keep their native layout, so no header line here
    std::fs::write(&a.out, body).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(())
}

fn ingest(ctx: &Ctx, a: IngestArgs) -> Result<()> {
    let format: CorpusFormat = a.format.parse().map_err(|e: String| anyhow!(e))?;
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let raw = inputs.read(&a.input)?;
    let dialogues = corpus::ingest_corpus(&raw, format)?;
    let header = inputs.header("ingest", ctx.seed, json!({ "format": format, "dialogues": dialogues.len() }));
    write_artifact(&a.out, &header, &dialogues)?;
    tracing::info!(dialogues = dialogues.len(), out = %a.out.display(), "ingested");
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PoolLine {
    Pool(CandidatePool),
    Failure(chitchat_core::generation::RequestFailure),
}

fn generate(ctx: &Ctx, a: GenerateArgs) -> Result<()> {
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let dialogues = load_corpus(&mut inputs, &a.corpus)?;
    let urls = config::generator_urls(a.generator_urls.as_deref(), &ctx.config);
    let backends: Vec<Box<dyn GeneratorBackend>> = if urls.is_empty() {
        vec![Box::new(TemplateGenerator::new("template-a")), Box::new(TemplateGenerator::new("template-b"))]
    } else {
        urls.iter().map(|u| Box::new(HttpGenerator::new(u.clone())) as Box<dyn GeneratorBackend>).collect()
    };
    let refs: Vec<&dyn GeneratorBackend> = backends.iter().map(|b| b.as_ref()).collect();
    let grid: Vec<DecodingParams> = if ctx.config.decoding.is_empty() {
        (0..2).map(|i| DecodingParams { seed: ctx.seed.wrapping_add(i), ..DecodingParams::default() }).collect()
    } else {
        ctx.config.decoding.clone()
    };
    let options = GenerationOptions {
        max_in_flight: a.max_in_flight.or(ctx.config.max_in_flight).unwrap_or(GenerationOptions::default().max_in_flight),
        ..GenerationOptions::default()
    };
    let run = generate_corpus_pools(&dialogues, &refs, &grid, &options)?;
    for f in &run.failures {
        tracing::warn!(dialogue = %f.dialogue_id, turn = f.turn_index, backend = %f.backend, error = %f.error, "request failed");
    }
    let backend_ids: Vec<&str> = refs.iter().map(|b| b.id()).collect();
    let header = inputs.header(
        "generate",
        ctx.seed,
        json!({ "backends": backend_ids, "decoding": grid, "failures": run.failures.len() }),
    );
    let lines: Vec<PoolLine> = run
        .pools
        .into_iter()
        .map(PoolLine::Pool)
        .chain(run.failures.into_iter().map(PoolLine::Failure))
        .collect();
    write_artifact(&a.out, &header, &lines)
}

fn filter(ctx: &Ctx, a: FilterArgs) -> Result<()> {
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let dialogues = load_corpus(&mut inputs, &a.corpus)?;
    let pools: Vec<CandidatePool> = inputs
        .read_records::<PoolLine>(&a.pools)?
        .into_iter()
        .filter_map(|l| match l {
            PoolLine::Pool(p) => Some(p),
            PoolLine::Failure(_) => None,
        })
        .collect();
    let patterns = match a.patterns.as_deref().or(ctx.config.patterns.as_deref().map(Path::new)) {
        Some(p) => {
            let raw = inputs.read(p)?;
            PatternSet::parse(&String::from_utf8_lossy(&raw)).map_err(|e| anyhow!("{}: line {}: {}", p.display(), e.line, e.message))?
        }
        None => PatternSet::default(),
    };
    let scorer_url = config::scorer_url(a.scorer_url.as_deref(), &ctx.config);
    let scorer: Box<dyn CandidateScorer> = match &scorer_url {
        Some(url) => Box::new(HttpScorer::new(url.clone())),
        None => Box::new(HeuristicScorer),
    };
    let w = &ctx.config.weights;
    let mut rank_config = RankConfig::with_weights(
        a.k.or(ctx.config.k).unwrap_or(DEFAULT_K),
        w.frequency,
        w.diversity,
        w.response,
    );
    rank_config.per_turn = a.per_turn || ctx.config.per_turn;

    let by_id: HashMap<&str, &Dialogue> = dialogues.iter().map(|d| (d.id.as_str(), d)).collect();
    let mut selected: Vec<RankedCandidate> = Vec::new();
    let mut excluded = 0;
    for pool in &pools {
        let dialogue = by_id
            .get(pool.dialogue_id.as_str())
            .ok_or_else(|| anyhow!("pool for unknown dialogue {}", pool.dialogue_id))?;
        let outcome = rank_pool(dialogue, pool, scorer.as_ref(), &patterns, &rank_config)?;
        excluded += outcome.excluded.len();
        selected.extend(outcome.selected);
    }
    let header = inputs.header(
        "filter",
        ctx.seed,
        json!({ "rank": rank_config, "scorer": scorer_url.as_deref().unwrap_or("heuristic"), "excluded": excluded }),
    );
    write_artifact(&a.out, &header, &selected)
}

fn export(ctx: &Ctx, a: ExportArgs) -> Result<()> {
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let dialogues = load_corpus(&mut inputs, &a.corpus)?;
    let ranked: Vec<RankedCandidate> = inputs.read_records(&a.filtered)?;
    let candidates: Vec<_> = ranked.into_iter().map(|r| r.candidate).collect();
    let batch_size = a.batch_size.or(ctx.config.batch_size).unwrap_or(DEFAULT_BATCH);
    let batches = annotation::export_tasks(&dialogues, &candidates, batch_size)?;
    let header = inputs.header("export-tasks", ctx.seed, json!({ "batch_size": batch_size, "tasks": candidates.len() }));
    write_artifact(&a.out, &header, &batches)
}

fn serve(a: ServeArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let tasks = load_tasks(&mut inputs, a.store.tasks.as_deref())?;
    let comparisons: Vec<ComparisonTask> = match &a.store.comparisons {
        Some(p) => inputs.read_records(p)?,
        None => Vec::new(),
    };
    let _lock = DirLock::acquire(&a.store.log)?;
    let store = AnnotationStore::open(tasks, comparisons, &a.store.log)?
        .with_target_ratings(a.target_ratings)
        .with_judgments_per_task(a.judgments_per_task);
    let shared = chitchat_server::shared(store);
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&a.addr).await.with_context(|| format!("binding {}", a.addr))?;
        eprintln!("listening on {}", listener.local_addr()?);
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        chitchat_server::serve(listener, shared.clone(), shutdown).await?;
        anyhow::Ok(())
    })?;
    if let Some(path) = &a.snapshot {
        shared.read().expect("store lock").write_snapshot(path)?;
    }
    Ok(())
}

fn simulate_cmd(ctx: &Ctx, s: SimulateCommand) -> Result<()> {
    let (store_args, workers, annotations) = match &s {
        SimulateCommand::Annotations { store, annotators } => (store, *annotators, true),
        SimulateCommand::Judgments { store, judges } => (store, *judges, false),
    };
    let mut inputs = Inputs::default();
    let tasks = load_tasks(&mut inputs, store_args.tasks.as_deref())?;
    let comparisons: Vec<ComparisonTask> = match &store_args.comparisons {
        Some(p) => inputs.read_records(p)?,
        None => Vec::new(),
    };
    let _lock = DirLock::acquire(&store_args.log)?;
    let mut store = AnnotationStore::open(tasks, comparisons, &store_args.log)?;
    if !store.log().is_empty() {
        bail!("log {} already has records; simulate writes into a fresh log", store_args.log.display());
    }
    let n = if annotations {
        crate::simulate::annotate(&mut store, workers, ctx.seed)?
    } else {
        crate::simulate::judge(&mut store, workers, ctx.seed)?
    };
    tracing::info!(records = n, log = %store_args.log.display(), "simulated");
    Ok(())
}

fn stats(ctx: &Ctx, a: StoreReportArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let store = load_store(&mut inputs, &a.store)?;
    let stats = store.stats();
    print!("{}", stats.to_table());
    if let Some(out) = &a.out {
        let _lock = DirLock::acquire(out)?;
        write_artifact(out, &inputs.header("stats", ctx.seed, json!({})), &[stats])?;
    }
    Ok(())
}

fn kappa(ctx: &Ctx, a: KappaArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let store = load_store(&mut inputs, &a.report.store)?;
    let report: KappaReport = store.kappa_report(a.raters)?;
    println!(
        "kappa {:.4} over {} items with {} raters each ({} excluded)",
        report.kappa,
        report.items,
        report.raters_per_item,
        report.excluded.len()
    );
    if let Some(out) = &a.report.out {
        let _lock = DirLock::acquire(out)?;
        write_artifact(out, &inputs.header("kappa", ctx.seed, json!({ "raters": a.raters })), &[report])?;
    }
    Ok(())
}

fn build_sequences(ctx: &Ctx, a: SequenceArgs) -> Result<()> {
    let flavor = config::flavor(a.flavor.as_deref(), &ctx.config)?;
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let dialogues = load_corpus(&mut inputs, &a.corpus)?;
    let labeled = labeled_from(&mut inputs, &a.store)?;
    let mut records = Vec::new();
    for d in &dialogues {
        records.extend(expand_training_set(d, &labeled, flavor)?);
    }
    let header = inputs.header("build-sequences", ctx.seed, json!({ "flavor": flavor, "sequences": records.len() }));
    write_artifact(&a.out, &header, &records)
}

/// Best good candidate per turn, attached everywhere one exists.
fn fully_augmented(dialogue: &Dialogue, good: Option<&GoodByTurn>) -> AugmentedDialogue {
    let mut ad = AugmentedDialogue::new(dialogue.clone());
    if let Some(good) = good {
        for (turn, cands) in good {
            if let Some(best) = cands.first() {
                ad.augmentations.insert(*turn, Augmentation::from(best));
            }
        }
    }
    ad
}

fn arrange(ctx: &Ctx, a: ArrangeArgs) -> Result<()> {
    let threshold = a.max_injection_frequency.or(ctx.config.max_injection_frequency);
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let dialogues = load_corpus(&mut inputs, &a.corpus)?;
    let labeled = labeled_from(&mut inputs, &a.store)?;
    let good = annotation::good_by_turn(&labeled);
    let task_model: HashMap<(String, usize), TurnPrediction> = match &a.predictions {
        Some(p) => inputs
            .read_records::<TurnPrediction>(p)?
            .into_iter()
            .map(|t| ((t.dialogue_id.clone(), t.turn_index), t))
            .collect(),
        None => HashMap::new(),
    };
    let scorer_url = config::arranger_scorer_url(a.arranger_scorer_url.as_deref(), &ctx.config);
    let scorer: Box<dyn ChoiceScorer> = match &scorer_url {
        Some(url) => Box::new(HttpChoiceScorer::new(url.clone())),
        None => Box::new(HeuristicChoiceScorer),
    };

    let mut out = Vec::new();
    for d in &dialogues {
        let mut arranger = GatedArranger::new(scorer.as_ref(), threshold)?;
        for turn in d.system_turns() {
            let base = match task_model.get(&(d.id.clone(), turn.index)) {
                Some(p) => p.clone(),
                None if a.predictions.is_some() => {
                    bail!("predictions have no entry for dialogue {} turn {}", d.id, turn.index)
                }
                None => TurnPrediction {
                    dialogue_id: d.id.clone(),
                    turn_index: turn.index,
                    belief: d.user_turn_before(turn.index).map(|u| u.belief()).unwrap_or_default(),
                    actions: turn.actions(),
                    response: turn.delexicalized()?,
                    chitchat: false,
                },
            };
            let history: Vec<ContextTurn> =
                d.turns[..turn.index].iter().map(|t| ContextTurn::new(t.speaker, t.utterance.clone())).collect();
            let chitchat = good.get(&d.id).and_then(|g| g.get(&turn.index)).and_then(|c| c.first()).map(|c| c.text.as_str());
            let gated = arranger.step(&history, &base.response, chitchat)?;
            out.push(TurnPrediction {
                response: gated.arrangement.text,
                chitchat: gated.arrangement.choice != chitchat_core::arranger::Choice::TaskOnly,
                ..base
            });
        }
    }
    let header = inputs.header(
        "arrange",
        ctx.seed,
        json!({ "max_injection_frequency": threshold, "scorer": scorer_url.as_deref().unwrap_or("heuristic") }),
    );
    write_artifact(&a.out, &header, &out)
}

fn evaluate_cmd(ctx: &Ctx, a: EvaluateArgs) -> Result<()> {
    let _lock = DirLock::acquire(&a.out)?;
    let mut inputs = Inputs::default();
    let dialogues = load_corpus(&mut inputs, &a.corpus)?;
    let predictions: Vec<TurnPrediction> = inputs.read_records(&a.predictions)?;
    let good = match (&a.tasks, &a.log) {
        (Some(tasks), Some(log)) => {
            let args = StoreArgs { tasks: Some(tasks.clone()), comparisons: None, log: log.clone() };
            annotation::good_by_turn(&labeled_from(&mut inputs, &args)?)
        }
        _ => HashMap::new(),
    };
    let gold: Vec<AugmentedDialogue> = dialogues.iter().map(|d| fully_augmented(d, good.get(&d.id))).collect();
    let training_services: BTreeSet<String> = match &a.train_corpus {
        Some(p) => load_corpus(&mut inputs, p)?.into_iter().flat_map(|d| d.services).collect(),
        None => BTreeSet::new(),
    };
    let report: EvalReport = evaluate(&gold, &predictions, &training_services)?;
    print!("{}", report.to_table());
    write_artifact(&a.out, &inputs.header("evaluate", ctx.seed, json!({})), &[report])
}

#[derive(Debug, Serialize, Deserialize)]
struct VariantLine {
    system: String,
    dialogue: AugmentedDialogue,
}

pub const ORIGINAL_SYSTEM: &str = "original";

fn acute_cmd(ctx: &Ctx, c: AcuteCommand) -> Result<()> {
    match c {
        AcuteCommand::Sample { corpus: corpus_path, store, n, min_turns, intervals, out } => {
            let intervals: Vec<FrequencyInterval> = match intervals {
                Some(s) => s.split(',').map(|i| i.trim().parse().map_err(|e: String| anyhow!(e))).collect::<Result<_>>()?,
                None => FrequencyInterval::ALL.to_vec(),
            };
            let _lock = DirLock::acquire(&out)?;
            let mut inputs = Inputs::default();
            let dialogues = load_corpus(&mut inputs, &corpus_path)?;
            let good = annotation::good_by_turn(&labeled_from(&mut inputs, &store)?);
            let criteria = SampleCriteria { min_turns, ..SampleCriteria::default() };
            let empty = GoodByTurn::new();
            // every system must be able to render every sampled dialogue
            let feasible: Vec<Dialogue> = dialogues
                .iter()
                .filter(|d| {
                    let g = good.get(&d.id).unwrap_or(&empty);
                    intervals.iter().all(|i| acute::make_frequency_variant(d, g, *i, 0).is_ok())
                })
                .cloned()
                .collect();
            let sampled = acute::sample_eval_dialogues(&feasible, &good, n, &criteria, ctx.seed)?;
            let mut lines = Vec::new();
            for (i, d) in sampled.iter().enumerate() {
                lines.push(VariantLine { system: ORIGINAL_SYSTEM.into(), dialogue: AugmentedDialogue::new(d.clone()) });
                let g = good.get(&d.id).unwrap_or(&empty);
                for interval in &intervals {
                    let v = acute::make_frequency_variant(d, g, *interval, ctx.seed.wrapping_add(i as u64))?;
                    lines.push(VariantLine { system: system_name(*interval), dialogue: v });
                }
            }
            let header = inputs.header(
                "acute sample",
                ctx.seed,
                json!({ "n": n, "min_turns": min_turns, "intervals": intervals, "feasible": feasible.len() }),
            );
            write_artifact(&out, &header, &lines)
        }
        AcuteCommand::BuildPairs { variants, axes, out } => {
            let axes: Vec<Axis> = match axes {
                Some(s) => s.split(',').map(|a| a.trim().parse().map_err(|e: String| anyhow!(e))).collect::<Result<_>>()?,
                None => Axis::ALL.to_vec(),
            };
            let _lock = DirLock::acquire(&out)?;
            let mut inputs = Inputs::default();
            let mut systems: BTreeMap<String, Vec<AugmentedDialogue>> = BTreeMap::new();
            for line in inputs.read_records::<VariantLine>(&variants)? {
                systems.entry(line.system).or_default().push(line.dialogue);
            }
            let tasks = acute::build_pairs(&systems, &axes, ctx.seed)?;
            let header = inputs.header("acute build-pairs", ctx.seed, json!({ "axes": axes, "tasks": tasks.len() }));
            write_artifact(&out, &header, &tasks)
        }
        AcuteCommand::Aggregate { comparisons, log, out } => {
            let _lock = DirLock::acquire(&out)?;
            let mut inputs = Inputs::default();
            let tasks: Vec<ComparisonTask> = inputs.read_records(&comparisons)?;
            let raw = inputs.read(&log)?;
            let results: Vec<_> = parse_records::<LogEntry>(&raw)?
                .into_iter()
                .filter_map(|e| match e {
                    LogEntry::Judgment(j) => Some(j),
                    LogEntry::Annotation(_) => None,
                })
                .collect();
            let cells: Vec<CellReport> = acute::aggregate(&results, &tasks)?;
            print!("{}", acute::render_matrix(&cells));
            write_artifact(&out, &inputs.header("acute aggregate", ctx.seed, json!({ "judgments": results.len() })), &cells)
        }
    }
}

fn system_name(interval: FrequencyInterval) -> String {
    let v = serde_json::to_value(interval).expect("interval serializes");
    format!("freq-{}", v.as_str().unwrap_or("unknown"))
}
