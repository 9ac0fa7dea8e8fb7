//! Disease–demographic co-occurrence counting and rank-concordance auditing.
//!
//! The crate covers the full offline pipeline:
//!
//! - [`dictionary`]: curated keyword dictionaries (diseases, race/ethnicity and
//!   gender subgroups) compiled into a token-sequence matcher.
//! - [`scanner`]: tokenization, windowed co-occurrence counting over JSONL
//!   corpora (plain, gzip or zstd), parallel with deterministic results.
//! - [`templates`]: multilingual prompt templates rendered per
//!   (disease, subgroup) pair for external model scoring.
//! - [`logits`]: ingestion of per-template sequence scores, per-pair means and
//!   model rank tables.
//! - [`prevalence`]: real-world prevalence tables and their "gold" ranks.
//! - [`stats`]: Kendall's tau (tau-a), drift, position tallies, quartile
//!   summaries and template-robustness metrics.
//! - [`cli`]: the `cooccur-audit` command-line driver.
//!
//! Rank 1 always means "most prevalent": highest count, highest mean score or
//! highest rate. Tied subgroups share the minimum rank and are flagged.

pub mod cli;
pub mod dictionary;
pub mod error;
pub mod logits;
pub mod prevalence;
pub mod rank;
pub mod scanner;
pub mod stats;
pub mod templates;

pub use dictionary::{
    compile_matcher, load_dictionary, save_dictionary, Category, CompiledMatcher, Concept,
    DictionaryBundle, Occurrence,
};
pub use error::Error;
pub use logits::{
    load_logits, mean_logits, rank_from_logits, LogitRecord, LogitTable, MeanLogit, ScoringMode,
};
pub use prevalence::{load_prevalence, normalize_rate, rank_from_prevalence, PrevalenceTable};
pub use rank::{RankRow, RankTable};
pub use scanner::{
    count_corpus, normalize_text, rank_from_counts, scan_document, CoOccurrenceMatrix,
    CountOptions, DedupMode, Scanner, TokenStream, WindowConfig,
};
pub use stats::{
    drift, kendall_tau, position_tally, quartile_tau, template_pairwise_tau,
    template_top_agreement, DriftReport, Position, PositionTally, TauResult,
};
pub use templates::{render, render_matrix, RenderedPrompt, TemplateSet};
