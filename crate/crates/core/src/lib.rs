//! Chit-chat augmentation of task-oriented dialogue corpora.
//!
//! The pipeline ingests a dialogue corpus, generates and filters chit-chat
//! candidates, collects human labels, serializes training sequences,
//! arranges task and chit-chat responses at inference time and evaluates the
//! results automatically and with pairwise human judgments.
//!
//! Numeric code is generic over [`scalar::Field`] / [`scalar::Real`]; the
//! aliases below fix the common concrete choices.

pub mod acute;
pub mod annotation;
pub mod arranger;
pub mod augment;
pub mod backend;
pub mod codec;
pub mod corpus;
pub mod filter;
pub mod generation;
pub mod metrics;
pub mod scalar;
pub mod text;

/// Exact rational scalar for agreement and ratio metrics.
pub type Rational = num_rational::Ratio<i64>;

pub type EvalReport = metrics::EvalReport<f64>;
pub type SplitMetrics = metrics::SplitMetrics<f64>;
pub type KappaReport = annotation::KappaReport<f64>;
pub type CellReport = acute::CellReport<f64>;
pub type RankConfig = filter::RankConfig<f64>;
pub type RankedCandidate = filter::RankedCandidate<f64>;
pub type RankOutcome = filter::RankOutcome<f64>;
