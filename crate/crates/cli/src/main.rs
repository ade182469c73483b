//! `chitchat`: command-line driver for the augmentation pipeline.

mod artifact;
mod commands;
mod config;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "chitchat", version, about = "Chit-chat augmentation pipeline for task-oriented dialogue corpora")]
pub struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice; runs with equal inputs and seed produce equal artifacts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded synthetic corpus (for fixtures and trial runs).
    Synth(SynthArgs),
    /// Parse and validate a corpus, writing canonical line-delimited dialogues.
    Ingest(IngestArgs),
    /// Collect chit-chat candidate pools from generator backends.
    Generate(GenerateArgs),
    /// Drop bad-pattern candidates and keep the top k per dialogue.
    Filter(FilterArgs),
    /// Bundle filtered candidates into annotation task batches.
    ExportTasks(ExportArgs),
    /// Serve the annotation and judging API.
    Serve(ServeArgs),
    /// Record annotations or judgments from seeded stand-in workers.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Label counts and justification breakdown.
    Stats(StoreReportArgs),
    /// Fleiss' kappa over collected labels.
    Kappa(KappaArgs),
    /// Emit training sequences for a model flavor.
    BuildSequences(SequenceArgs),
    /// Arrange task responses with chit-chat, optionally capping injection frequency.
    Arrange(ArrangeArgs),
    /// Score predictions against gold dialogues.
    Evaluate(EvaluateArgs),
    /// Pairwise human evaluation: sampling, pairing and aggregation.
    #[command(subcommand)]
    Acute(AcuteCommand),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// `sgd` or `canonical`.
    #[arg(long, default_value = "sgd")]
    pub format: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `sgd`, `multiwoz21` or `canonical`.
    #[arg(long, default_value = "sgd")]
    pub format: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated generator endpoints; built-in template generators when absent.
    #[arg(long)]
    pub generator_urls: Option<String>,
    #[arg(long)]
    pub max_in_flight: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub pools: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    /// Quality classifier endpoint; a built-in heuristic when absent.
    #[arg(long)]
    pub scorer_url: Option<String>,
    /// Keep k per system turn instead of per dialogue.
    #[arg(long)]
    pub per_turn: bool,
    /// Bad-pattern rule file replacing the built-in rules.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub filtered: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub batch_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StoreArgs {
    /// Annotation task batches from `export-tasks`.
    #[arg(long)]
    pub tasks: Option<PathBuf>,
    /// Comparison tasks from `acute build-pairs`.
    #[arg(long)]
    pub comparisons: Option<PathBuf>,
    /// Append-only record log.
    #[arg(long)]
    pub log: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub store: StoreArgs,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: String,
    /// Stop serving a task once this many annotators have labeled it (0 = never).
    #[arg(long, default_value_t = 0)]
    pub target_ratings: usize,
    #[arg(long, default_value_t = 1)]
    pub judgments_per_task: usize,
    /// Write a snapshot of the store here on shutdown.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    Annotations {
        #[command(flatten)]
        store: StoreArgs,
        #[arg(long, default_value_t = 3)]
        annotators: usize,
    },
    Judgments {
        #[command(flatten)]
        store: StoreArgs,
        #[arg(long, default_value_t = 3)]
        judges: usize,
    },
}

#[derive(Debug, Args)]
pub struct StoreReportArgs {
    #[command(flatten)]
    pub store: StoreArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KappaArgs {
    #[command(flatten)]
    pub report: StoreReportArgs,
    /// Ratings per item; defaults to the largest count seen.
    #[arg(long)]
    pub raters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub store: StoreArgs,
    /// `simpletod`, `plus` or `rewriter`.
    #[arg(long)]
    pub flavor: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ArrangeArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub store: StoreArgs,
    /// Task-model predictions; gold delexicalized responses when absent.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    #[arg(long)]
    pub max_injection_frequency: Option<f64>,
    /// Arrangement scorer endpoint; a built-in heuristic when absent.
    #[arg(long)]
    pub arranger_scorer_url: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub predictions: PathBuf,
    /// Annotation tasks and log supplying gold add-ons for BLEU-A.
    #[arg(long)]
    pub tasks: Option<PathBuf>,
    #[arg(long, requires = "tasks")]
    pub log: Option<PathBuf>,
    /// Training corpus; dialogues whose services all appear in it form the seen split.
    #[arg(long)]
    pub train_corpus: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum AcuteCommand {
    /// Sample evaluation dialogues and build one variant per frequency interval.
    Sample {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        store: StoreArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        min_turns: usize,
        /// Comma-separated intervals; all four when absent.
        #[arg(long)]
        intervals: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pair systems over shared dialogues and axes.
    BuildPairs {
        #[arg(long)]
        variants: PathBuf,
        /// Comma-separated axes; all four when absent.
        #[arg(long)]
        axes: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Win rates and significance per system pair and axis.
    Aggregate {
        #[arg(long)]
        comparisons: PathBuf,
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()),
        )
        .with_writer(std::io::stderr)
        .with_ansi(false)
        .init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", commands::error_record(&e));
            ExitCode::FAILURE
        }
    }
}
