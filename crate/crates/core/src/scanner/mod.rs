//! Windowed disease–demographic co-occurrence counting.
//!
//! A co-occurrence is a disease mention and a demographic mention whose start
//! tokens are at most `W` tokens apart. In [`DedupMode::MentionPairs`] every
//! such mention pair counts once per window size; in
//! [`DedupMode::PerDocument`] a (disease, subgroup, window) cell gains at most
//! one per document. A disease mention may pair with any number of
//! demographic mentions.
//!
//! [`count_corpus`] is document-parallel: each worker owns a private matrix
//! and matrices are summed at the end, so results do not depend on worker
//! count or arrival order. `parallelism = 1` runs on the calling thread and
//! is the reference path.

pub mod corpus;
pub mod matrix;
pub(crate) mod tokenize;

use std::collections::HashMap;
use std::io;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{CoOccurrenceMatrix, CountRow, MatrixLayout};
pub use tokenize::{normalize_phrase, normalize_text, TokenStream};

use crate::dictionary::{Category, CompiledMatcher};
use crate::rank::{RankRow, RankTable};

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("corpus read failed: {0}")]
    Io(#[from] io::Error),
    #[error("document {ordinal}: {message}")]
    Format { ordinal: u64, message: String },
    #[error("count csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("matrices have different layouts")]
    LayoutMismatch,
    #[error("invalid windows: {0}")]
    InvalidWindows(String),
    #[error("no subgroups of category {0} in the matrix")]
    EmptyCategory(Category),
    #[error("window {0} not present in the matrix")]
    WindowNotPresent(u32),
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupMode {
    #[default]
    MentionPairs,
    PerDocument,
}

impl FromStr for DedupMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "mention_pairs" => Ok(DedupMode::MentionPairs),
            "per_document" => Ok(DedupMode::PerDocument),
            other => Err(format!("unknown dedup mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowConfig {
    windows: Vec<u32>,
    pub dedup_mode: DedupMode,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            windows: vec![50, 100, 250],
            dedup_mode: DedupMode::MentionPairs,
        }
    }
}

impl WindowConfig {
    /// `windows` must be non-empty, positive and strictly increasing.
    pub fn new(windows: Vec<u32>, dedup_mode: DedupMode) -> Result<Self, ScanError> {
        if windows.is_empty() {
            return Err(ScanError::InvalidWindows("no windows given".into()));
        }
        if windows.contains(&0) {
            return Err(ScanError::InvalidWindows("windows must be positive".into()));
        }
        if windows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ScanError::InvalidWindows(format!(
                "windows must be strictly increasing, got {windows:?}"
            )));
        }
        Ok(Self {
            windows,
            dedup_mode,
        })
    }

    pub fn windows(&self) -> &[u32] {
        &self.windows
    }

    pub fn max_window(&self) -> u32 {
        *self.windows.last().expect("validated non-empty")
    }
}

/// A matcher bound to a window configuration and matrix layout.
#[derive(Debug, Clone)]
pub struct Scanner<'m> {
    matcher: &'m CompiledMatcher,
    cfg: WindowConfig,
    layout: Arc<MatrixLayout>,
    /// concept index -> disease axis position
    disease_slot: Vec<Option<usize>>,
    /// concept index -> subgroup axis position
    subgroup_slot: Vec<Option<usize>>,
}

impl<'m> Scanner<'m> {
    pub fn new(matcher: &'m CompiledMatcher, cfg: WindowConfig) -> Self {
        let layout = Arc::new(MatrixLayout::from_matcher(matcher, cfg.windows()));
        let disease_slot = matcher
            .concepts()
            .iter()
            .map(|c| match c.category {
                Category::Disease => layout.disease_index(&c.id),
                _ => None,
            })
            .collect();
        let subgroup_slot = matcher
            .concepts()
            .iter()
            .map(|c| match c.category {
                Category::Disease => None,
                cat => layout.subgroup_index(&c.id, cat),
            })
            .collect();
        Self {
            matcher,
            cfg,
            layout,
            disease_slot,
            subgroup_slot,
        }
    }

    pub fn layout(&self) -> &Arc<MatrixLayout> {
        &self.layout
    }

    pub fn config(&self) -> &WindowConfig {
        &self.cfg
    }

    pub fn matcher(&self) -> &CompiledMatcher {
        self.matcher
    }

    pub fn empty_matrix(&self) -> CoOccurrenceMatrix {
        CoOccurrenceMatrix::zeros(Arc::clone(&self.layout))
    }

    pub fn scan(&self, doc: &TokenStream) -> CoOccurrenceMatrix {
        let mut m = self.empty_matrix();
        self.scan_into(&mut m, &doc.tokens);
        m
    }

    /// Adds one document's co-occurrences to `m`, which must use this
    /// scanner's layout.
    pub fn scan_into<S: AsRef<str>>(&self, m: &mut CoOccurrenceMatrix, tokens: &[S]) {
        debug_assert!(Arc::ptr_eq(m.layout(), &self.layout) || **m.layout() == *self.layout);
        let mut diseases: Vec<(usize, usize)> = Vec::new();
        let mut demographics: Vec<(usize, usize)> = Vec::new();
        for occ in self.matcher.find(tokens) {
            let c = occ.concept as usize;
            if let Some(d) = self.disease_slot[c] {
                diseases.push((d, occ.start));
            } else if let Some(s) = self.subgroup_slot[c] {
                demographics.push((s, occ.start));
            }
        }
        m.docs_scanned += 1;
        m.tokens_scanned += tokens.len() as u64;
        if diseases.is_empty() || demographics.is_empty() {
            return;
        }

        let windows = self.cfg.windows();
        let max_w = self.cfg.max_window() as usize;
        let layout = &self.layout;
        // demographics are in start order (find() yields by start)
        let mut nearest: HashMap<(usize, usize), usize> = HashMap::new();
        for &(d, i) in &diseases {
            let lo = i.saturating_sub(max_w);
            let first = demographics.partition_point(|&(_, j)| j < lo);
            for &(s, j) in &demographics[first..] {
                if j > i + max_w {
                    break;
                }
                let dist = i.abs_diff(j);
                match self.cfg.dedup_mode {
                    DedupMode::MentionPairs => {
                        let w0 = windows.partition_point(|&w| (w as usize) < dist);
                        for w in w0..windows.len() {
                            m.add_at(layout.offset(d, s, w), 1);
                        }
                    }
                    DedupMode::PerDocument => {
                        let e = nearest.entry((d, s)).or_insert(dist);
                        *e = (*e).min(dist);
                    }
                }
            }
        }
        for ((d, s), dist) in nearest {
            let w0 = windows.partition_point(|&w| (w as usize) < dist);
            for w in w0..windows.len() {
                m.add_at(layout.offset(d, s, w), 1);
            }
        }
    }
}

pub fn scan_document(
    doc: &TokenStream,
    matcher: &CompiledMatcher,
    cfg: &WindowConfig,
) -> CoOccurrenceMatrix {
    Scanner::new(matcher, cfg.clone()).scan(doc)
}

#[derive(Debug, Clone)]
pub struct CountOptions {
    pub parallelism: usize,
    /// Skip malformed documents instead of failing.
    pub lenient: bool,
    pub progress_interval: Duration,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
            lenient: false,
            progress_interval: Duration::from_secs(5),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Progress {
    pub docs: u64,
    pub tokens: u64,
    pub elapsed_secs: f64,
    pub docs_per_sec: f64,
    pub tokens_per_sec: f64,
    pub done: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedDoc {
    /// 0-based line index across all shards.
    pub ordinal: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct CountOutcome {
    pub matrix: CoOccurrenceMatrix,
    pub skipped: Vec<SkippedDoc>,
}

struct Partial {
    matrix: CoOccurrenceMatrix,
    skipped: Vec<SkippedDoc>,
    io_error: Option<(u64, io::Error)>,
}

struct Counters {
    docs: AtomicU64,
    tokens: AtomicU64,
}

impl Partial {
    fn new(scanner: &Scanner<'_>) -> Self {
        Self {
            matrix: scanner.empty_matrix(),
            skipped: Vec::new(),
            io_error: None,
        }
    }

    fn process(
        &mut self,
        scanner: &Scanner<'_>,
        counters: &Counters,
        ordinal: u64,
        line: io::Result<String>,
    ) {
        let line = match line {
            Ok(line) => line,
            Err(e) => {
                if self.io_error.as_ref().is_none_or(|(o, _)| ordinal < *o) {
                    self.io_error = Some((ordinal, e));
                }
                return;
            }
        };
        if line.trim().is_empty() {
            return;
        }
        match corpus::parse_document(&line) {
            Ok(text) => {
                let tokens = tokenize::tokenize(&text);
                scanner.scan_into(&mut self.matrix, &tokens);
                counters.docs.fetch_add(1, Ordering::Relaxed);
                counters
                    .tokens
                    .fetch_add(tokens.len() as u64, Ordering::Relaxed);
            }
            Err(reason) => self.skipped.push(SkippedDoc { ordinal, reason }),
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.matrix.merge(&other.matrix).expect("shared layout");
        self.skipped.extend(other.skipped);
        if let Some((o, e)) = other.io_error {
            if self.io_error.as_ref().is_none_or(|(mine, _)| o < *mine) {
                self.io_error = Some((o, e));
            }
        }
        self
    }

    fn finish(mut self, lenient: bool) -> Result<CountOutcome, ScanError> {
        if let Some((_, e)) = self.io_error {
            return Err(ScanError::Io(e));
        }
        self.skipped.sort_by_key(|s| s.ordinal);
        if !lenient {
            if let Some(first) = self.skipped.into_iter().next() {
                return Err(ScanError::Format {
                    ordinal: first.ordinal,
                    message: first.reason,
                });
            }
            return Ok(CountOutcome {
                matrix: self.matrix,
                skipped: Vec::new(),
            });
        }
        Ok(CountOutcome {
            matrix: self.matrix,
            skipped: self.skipped,
        })
    }
}

/// Groups consecutive items so workers pull batches, not single lines.
struct Batches<I> {
    inner: I,
    size: usize,
}

impl<I: Iterator> Iterator for Batches<I> {
    type Item = Vec<I::Item>;

    fn next(&mut self) -> Option<Self::Item> {
        let batch: Vec<_> = self.inner.by_ref().take(self.size).collect();
        (!batch.is_empty()).then_some(batch)
    }
}

const BATCH_SIZE: usize = 256;

/// Counts co-occurrences over JSONL lines (see [`corpus::CorpusLines`]).
///
/// The result equals the sum of [`Scanner::scan`] over every document. Blank
/// lines are ignored. Malformed documents fail the run unless
/// `opts.lenient`, in which case they are skipped and reported; read errors
/// always fail. `progress` is called every `opts.progress_interval` and once
/// more at the end.
pub fn count_corpus<I>(
    lines: I,
    scanner: &Scanner<'_>,
    opts: &CountOptions,
    progress: Option<&(dyn Fn(&Progress) + Sync)>,
) -> Result<CountOutcome, ScanError>
where
    I: Iterator<Item = io::Result<String>> + Send,
{
    let counters = Counters {
        docs: AtomicU64::new(0),
        tokens: AtomicU64::new(0),
    };
    let done = AtomicBool::new(false);
    let started = Instant::now();
    let snapshot = |finished: bool| {
        let docs = counters.docs.load(Ordering::Relaxed);
        let tokens = counters.tokens.load(Ordering::Relaxed);
        let elapsed = started.elapsed().as_secs_f64();
        let rate = |n: u64| {
            if elapsed > 0.0 {
                n as f64 / elapsed
            } else {
                0.0
            }
        };
        Progress {
            docs,
            tokens,
            elapsed_secs: elapsed,
            docs_per_sec: rate(docs),
            tokens_per_sec: rate(tokens),
            done: finished,
        }
    };

    let partial = std::thread::scope(|scope| {
        if let Some(report) = progress {
            scope.spawn(|| {
                let tick = Duration::from_millis(20).min(opts.progress_interval);
                let mut last = Instant::now();
                while !done.load(Ordering::Acquire) {
                    std::thread::sleep(tick);
                    if last.elapsed() >= opts.progress_interval && !done.load(Ordering::Acquire) {
                        report(&snapshot(false));
                        last = Instant::now();
                    }
                }
            });
        }
        let result = run_workers(lines, scanner, opts, &counters);
        done.store(true, Ordering::Release);
        result
    })?;

    if let Some(report) = progress {
        report(&snapshot(true));
    }
    partial.finish(opts.lenient)
}

fn run_workers<I>(
    lines: I,
    scanner: &Scanner<'_>,
    opts: &CountOptions,
    counters: &Counters,
) -> Result<Partial, ScanError>
where
    I: Iterator<Item = io::Result<String>> + Send,
{
    let numbered = (0u64..).zip(lines);
    if opts.parallelism <= 1 {
        let mut acc = Partial::new(scanner);
        for (ordinal, line) in numbered {
            acc.process(scanner, counters, ordinal, line);
            if acc.io_error.is_some() || (!opts.lenient && !acc.skipped.is_empty()) {
                break;
            }
        }
        return Ok(acc);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism)
        .build()
        .map_err(|e| ScanError::ThreadPool(e.to_string()))?;
    let batches = Batches {
        inner: numbered,
        size: BATCH_SIZE,
    };
    Ok(pool.install(|| {
        batches
            .par_bridge()
            .fold(
                || Partial::new(scanner),
                |mut acc, batch| {
                    for (ordinal, line) in batch {
                        acc.process(scanner, counters, ordinal, line);
                    }
                    acc
                },
            )
            .reduce(|| Partial::new(scanner), Partial::merge)
    }))
}

/// Ranks each disease's subgroups of `category` by descending count at
/// `window`. The table's source is `counts` and its language `en`.
pub fn rank_from_counts(
    m: &CoOccurrenceMatrix,
    category: Category,
    window: u32,
) -> Result<RankTable, ScanError> {
    if m.layout().window_index(window).is_none() {
        return Err(ScanError::WindowNotPresent(window));
    }
    let subgroups: Vec<&str> = m
        .layout()
        .subgroups()
        .iter()
        .filter(|(_, c)| *c == category)
        .map(|(s, _)| s.as_str())
        .collect();
    if subgroups.is_empty() {
        return Err(ScanError::EmptyCategory(category));
    }
    let mut table = RankTable::new("counts", "en", category);
    for disease in m.layout().diseases() {
        let row = RankRow::from_scores(subgroups.iter().map(|s| {
            let count = m.get(disease, s, category, window).expect("cell in layout");
            (*s, count as f64)
        }));
        table.rows.insert(disease.clone(), row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::DictionaryBundle;

    fn matcher() -> CompiledMatcher {
        let b = DictionaryBundle::from_json(
            r#"{"version": "t",
            "diseases": [{"id": "asthma", "display": {}, "synonyms": {"en": ["asthma"]}}],
            "race": [{"id": "black", "display": {}, "synonyms": {"en": ["black", "african american"]}},
                     {"id": "white", "display": {}, "synonyms": {"en": ["white"]}}],
            "gender": [{"id": "male", "display": {}, "synonyms": {"en": ["male"]}}]}"#,
        )
        .unwrap();
        crate::dictionary::compile_matcher(&b, "en").unwrap()
    }

    fn doc_with(len: usize, plants: &[(usize, &str)]) -> TokenStream {
        let mut tokens = vec!["filler".to_string(); len];
        for (i, t) in plants {
            tokens[*i] = t.to_string();
        }
        TokenStream {
            tokens,
            source_doc_id: "t".into(),
        }
    }

    #[test]
    fn pair_inside_smallest_window() {
        let m = matcher();
        let doc = doc_with(60, &[(3, "asthma"), (40, "black")]);
        let c = scan_document(&doc, &m, &WindowConfig::default());
        for w in [50, 100, 250] {
            assert_eq!(
                c.get("asthma", "black", Category::RaceEthnicity, w),
                Some(1)
            );
        }
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn window_threshold() {
        let m = matcher();
        let doc = doc_with(130, &[(0, "asthma"), (120, "black")]);
        let c = scan_document(&doc, &m, &WindowConfig::default());
        let got: Vec<_> = [50, 100, 250]
            .iter()
            .map(|&w| {
                c.get("asthma", "black", Category::RaceEthnicity, w)
                    .unwrap()
            })
            .collect();
        assert_eq!(got, [0, 0, 1]);
    }

    #[test]
    fn boundary_distance_is_inclusive() {
        let m = matcher();
        let doc = doc_with(60, &[(0, "asthma"), (50, "white")]);
        let c = scan_document(&doc, &m, &WindowConfig::default());
        assert_eq!(
            c.get("asthma", "white", Category::RaceEthnicity, 50),
            Some(1)
        );
    }

    #[test]
    fn per_document_dedup() {
        let m = matcher();
        let doc = doc_with(
            300,
            &[
                (0, "asthma"),
                (5, "black"),
                (10, "black"),
                (20, "asthma"),
                (200, "male"),
            ],
        );
        let pairs = scan_document(&doc, &m, &WindowConfig::default());
        assert_eq!(
            pairs.get("asthma", "black", Category::RaceEthnicity, 50),
            Some(4)
        );
        let cfg = WindowConfig::new(vec![50, 100, 250], DedupMode::PerDocument).unwrap();
        let once = scan_document(&doc, &m, &cfg);
        assert_eq!(
            once.get("asthma", "black", Category::RaceEthnicity, 50),
            Some(1)
        );
        assert_eq!(once.get("asthma", "male", Category::Gender, 100), Some(0));
        assert_eq!(once.get("asthma", "male", Category::Gender, 250), Some(1));
    }

    #[test]
    fn invalid_windows() {
        assert!(WindowConfig::new(vec![], DedupMode::MentionPairs).is_err());
        assert!(WindowConfig::new(vec![100, 50], DedupMode::MentionPairs).is_err());
        assert!(WindowConfig::new(vec![0, 50], DedupMode::MentionPairs).is_err());
        assert!(WindowConfig::new(vec![50, 50], DedupMode::MentionPairs).is_err());
    }

    #[test]
    fn strict_and_lenient_format_errors() {
        let m = matcher();
        let scanner = Scanner::new(&m, WindowConfig::default());
        let lines = || {
            vec![
                Ok(r#"{"text": "asthma black"}"#.to_string()),
                Ok("{broken".to_string()),
                Ok(String::new()),
                Ok(r#"{"meta": {}}"#.to_string()),
            ]
            .into_iter()
        };
        for parallelism in [1, 3] {
            let opts = CountOptions {
                parallelism,
                ..Default::default()
            };
            match count_corpus(lines(), &scanner, &opts, None) {
                Err(ScanError::Format { ordinal, .. }) => assert_eq!(ordinal, 1),
                other => panic!("expected format error, got {other:?}"),
            }
            let opts = CountOptions {
                parallelism,
                lenient: true,
                ..Default::default()
            };
            let out = count_corpus(lines(), &scanner, &opts, None).unwrap();
            assert_eq!(
                out.skipped.iter().map(|s| s.ordinal).collect::<Vec<_>>(),
                [1, 3]
            );
            assert_eq!(out.matrix.docs_scanned, 1);
            assert_eq!(
                out.matrix
                    .get("asthma", "black", Category::RaceEthnicity, 50),
                Some(1)
            );
        }
    }

    #[test]
    fn read_error_is_fatal_even_when_lenient() {
        let m = matcher();
        let scanner = Scanner::new(&m, WindowConfig::default());
        let lines = vec![
            Ok("{\"text\": \"x\"}".to_string()),
            Err(io::Error::other("disk")),
        ];
        let opts = CountOptions {
            parallelism: 1,
            lenient: true,
            ..Default::default()
        };
        assert!(matches!(
            count_corpus(lines.into_iter(), &scanner, &opts, None),
            Err(ScanError::Io(_))
        ));
    }

    #[test]
    fn progress_is_reported() {
        let m = matcher();
        let scanner = Scanner::new(&m, WindowConfig::default());
        let lines = (0..100).map(|_| Ok(r#"{"text": "asthma white"}"#.to_string()));
        let seen = std::sync::Mutex::new(Vec::new());
        let report = |p: &Progress| seen.lock().unwrap().push((p.docs, p.done));
        let opts = CountOptions {
            parallelism: 2,
            progress_interval: Duration::from_millis(1),
            ..Default::default()
        };
        count_corpus(lines, &scanner, &opts, Some(&report)).unwrap();
        let seen = seen.into_inner().unwrap();
        assert_eq!(seen.last(), Some(&(100, true)));
    }

    #[test]
    fn rank_from_counts_errors() {
        let m = matcher();
        let c = Scanner::new(&m, WindowConfig::default()).empty_matrix();
        assert!(matches!(
            rank_from_counts(&c, Category::Gender, 75),
            Err(ScanError::WindowNotPresent(75))
        ));
        let t = rank_from_counts(&c, Category::RaceEthnicity, 250).unwrap();
        let row = t.row("asthma").unwrap();
        assert_eq!(row.rank("black"), Some(1));
        assert_eq!(row.rank("white"), Some(1));
        assert!(row.is_tied("black"));
        let only_race = DictionaryBundle::from_json(
            r#"{"version": "t",
            "diseases": [{"id": "asthma", "display": {}, "synonyms": {"en": ["asthma"]}}],
            "race": [{"id": "white", "display": {}, "synonyms": {"en": ["white"]}}],
            "gender": []}"#,
        )
        .unwrap();
        let mm = crate::dictionary::compile_matcher(&only_race, "en").unwrap();
        let c = Scanner::new(&mm, WindowConfig::default()).empty_matrix();
        assert!(matches!(
            rank_from_counts(&c, Category::Gender, 250),
            Err(ScanError::EmptyCategory(Category::Gender))
        ));
    }
}
