//! The `cooccur-audit` command-line driver.
//!
//! Reports are written under `--out`; a JSON summary of each run goes to
//! stdout and diagnostics to stderr. Exit codes: 0 success, 1 usage,
//! 2 data error, 3 I/O error.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use config::RunConfig;

use crate::dictionary::{compile_matcher, load_dictionary, Category, CORPUS_LANGUAGE};
use crate::error::Error;
use crate::logits::{load_logits, mean_logits, rank_from_logits, LogitTable};
use crate::prevalence::{load_prevalence, rank_from_prevalence};
use crate::rank::RankTable;
use crate::scanner::corpus::CorpusLines;
use crate::scanner::{
    count_corpus, rank_from_counts, CoOccurrenceMatrix, CountOptions, DedupMode, Progress, Scanner,
    WindowConfig,
};
use crate::stats::{
    compare_tables, drift, mean_tau, position_tally, quartile_tau, template_pairwise_tau,
    template_top_agreement, Position, TauResult,
};
use crate::templates::{prompts_to_jsonl, render_matrix, TemplateSet, IN_AMERICA_SUFFIX};

const DEFAULT_OUT: &str = "out";
const PREFERRED_WINDOW: u32 = 250;

#[derive(Debug, Parser)]
#[command(
    name = "cooccur-audit",
    version,
    about = "Disease-demographic co-occurrence and rank-concordance audit"
)]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for counting [default: all cores].
    #[arg(long, global = true)]
    pub parallelism: Option<usize>,
    /// Skip malformed corpus documents instead of failing.
    #[arg(long, global = true)]
    pub lenient: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankSource {
    Counts,
    Logits,
    Prevalence,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count disease-demographic co-occurrences in JSONL corpus shards.
    Count {
        /// Shards (.jsonl, .jsonl.gz, .jsonl.zst) or directories of shards.
        #[arg(long, num_args = 1..)]
        corpus: Vec<PathBuf>,
        #[arg(long = "dict")]
        dictionary: Option<PathBuf>,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',')]
        windows: Vec<u32>,
        #[arg(long)]
        dedup: Option<DedupMode>,
    },
    /// Render prompts for every (disease, subgroup, template).
    Render {
        #[arg(long = "dict")]
        dictionary: Option<PathBuf>,
        /// One template file per language.
        #[arg(long, num_args = 1..)]
        templates: Vec<PathBuf>,
        /// Restrict to one demographic category.
        #[arg(long)]
        category: Option<Category>,
        /// Append " in America" to every prompt.
        #[arg(long)]
        in_america: bool,
    },
    /// Build rank tables from counts, logits or prevalence.
    Rank {
        #[arg(value_enum)]
        source: RankSource,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        category: Option<Category>,
        /// Count window to rank at [default: 250 if present, else the largest].
        #[arg(long)]
        window: Option<u32>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        language: Option<String>,
    },
    /// Kendall tau and position tallies between two rank tables.
    Compare {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Ranking drift of aligned models relative to a base model.
    Drift {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, num_args = 1..)]
        aligned: Vec<PathBuf>,
    },
    /// Per-template agreement metrics for logit files.
    Robustness {
        #[arg(long)]
        logits: Option<PathBuf>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        language: Option<String>,
        #[arg(long)]
        category: Option<Category>,
    },
    /// Mean tau per quartile of disease co-occurrence totals.
    Quartiles {
        /// `compare_tau.csv` from the compare command.
        #[arg(long)]
        tau: PathBuf,
        #[arg(long)]
        counts: Option<PathBuf>,
        #[arg(long)]
        category: Category,
        #[arg(long)]
        window: Option<u32>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Render { .. } => "render",
            Command::Rank { .. } => "rank",
            Command::Compare { .. } => "compare",
            Command::Drift { .. } => "drift",
            Command::Robustness { .. } => "robustness",
            Command::Quartiles { .. } => "quartiles",
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the stdout summary.
pub fn run<I, T>(args: I) -> Result<Value, Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    execute(cli)
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(summary) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&summary).expect("json")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    out: PathBuf,
    parallelism: Option<usize>,
    lenient: bool,
    written: Vec<String>,
}

impl Ctx {
    fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), Error> {
        fs::create_dir_all(&self.out).map_err(|e| Error::io(&self.out, e))?;
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(path.display().to_string());
        Ok(())
    }
}

fn execute(cli: Cli) -> Result<Value, Error> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let parallelism = cli.parallelism.or(cfg.parallelism);
    if parallelism == Some(0) {
        return Err(Error::Usage("--parallelism must be at least 1".into()));
    }
    let lenient = cli.lenient || cfg.lenient.unwrap_or(false);
    let mut ctx = Ctx {
        cfg,
        out,
        parallelism,
        lenient,
        written: Vec::new(),
    };
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let name = cli.command.name();
    let mut summary = match cli.command {
        Command::Count {
            corpus,
            dictionary,
            windows,
            dedup,
        } => cmd_count(&mut ctx, corpus, dictionary, windows, dedup)?,
        Command::Render {
            dictionary,
            templates,
            category,
            in_america,
        } => cmd_render(&mut ctx, dictionary, templates, category, in_america)?,
        Command::Rank {
            source,
            input,
            category,
            window,
            model,
            language,
        } => cmd_rank(&mut ctx, source, input, category, window, model, language)?,
        Command::Compare { left, right } => cmd_compare(&mut ctx, &left, &right)?,
        Command::Drift { base, aligned } => cmd_drift(&mut ctx, &base, &aligned)?,
        Command::Robustness {
            logits,
            model,
            language,
            category,
        } => cmd_robustness(&mut ctx, logits, model, language, category)?,
        Command::Quartiles {
            tau,
            counts,
            category,
            window,
        } => cmd_quartiles(&mut ctx, &tau, counts, category, window)?,
    };
    let meta = json!({
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "started_unix": started,
        "outputs": ctx.written,
    });
    ctx.write(&format!("{name}.meta.json"), pretty(&meta))?;
    if let Value::Object(map) = &mut summary {
        map.insert("command".into(), json!(name));
        map.insert("outputs".into(), json!(ctx.written));
    }
    Ok(summary)
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn require(flag: Option<PathBuf>, from_cfg: Option<PathBuf>, what: &str) -> Result<PathBuf, Error> {
    let path = flag
        .or(from_cfg)
        .ok_or_else(|| Error::Usage(format!("no {what} given (flag or config)")))?;
    ensure_exists(&path)?;
    Ok(path)
}

fn ensure_exists(path: &Path) -> Result<(), Error> {
    if !path.exists() {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not found"),
        ));
    }
    Ok(())
}

/// Files directly inside directories are taken in name order.
fn expand_shards(paths: Vec<PathBuf>) -> Result<Vec<PathBuf>, Error> {
    let mut out = Vec::new();
    for p in paths {
        ensure_exists(&p)?;
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(&p)
                .map_err(|e| Error::io(&p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file())
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p);
        }
    }
    Ok(out)
}

fn cmd_count(
    ctx: &mut Ctx,
    corpus: Vec<PathBuf>,
    dictionary: Option<PathBuf>,
    windows: Vec<u32>,
    dedup: Option<DedupMode>,
) -> Result<Value, Error> {
    let dict_path = require(
        dictionary,
        ctx.cfg.dictionary.clone(),
        "dictionary (--dict)",
    )?;
    let corpus = if corpus.is_empty() {
        ctx.cfg.corpus.clone()
    } else {
        corpus
    };
    if corpus.is_empty() {
        return Err(Error::Usage("no corpus given (--corpus or config)".into()));
    }
    let shards = expand_shards(corpus)?;
    let windows = if windows.is_empty() {
        ctx.cfg
            .windows
            .clone()
            .unwrap_or_else(|| WindowConfig::default().windows().to_vec())
    } else {
        windows
    };
    let dedup = dedup.or(ctx.cfg.dedup_mode).unwrap_or_default();
    let cfg = WindowConfig::new(windows, dedup).map_err(|e| Error::Usage(e.to_string()))?;

    let bundle = load_dictionary(&dict_path)?;
    let matcher = compile_matcher(&bundle, CORPUS_LANGUAGE)?;
    let scanner = Scanner::new(&matcher, cfg);
    let mut opts = CountOptions {
        lenient: ctx.lenient,
        ..CountOptions::default()
    };
    if let Some(p) = ctx.parallelism {
        opts.parallelism = p;
    }
    let report = |p: &Progress| {
        eprintln!(
            "{}",
            serde_json::to_string(&json!({ "progress": p })).expect("json")
        );
    };
    let outcome = count_corpus(CorpusLines::new(shards), &scanner, &opts, Some(&report))?;
    for s in &outcome.skipped {
        eprintln!("skipped document {}: {}", s.ordinal, s.reason);
    }
    let m = &outcome.matrix;
    ctx.write("counts.csv", m.to_csv_string())?;
    ctx.write("counts.json", m.to_json_string())?;
    if !outcome.skipped.is_empty() {
        ctx.write("skipped.json", pretty(&outcome.skipped))?;
    }
    Ok(json!({
        "docs_scanned": m.docs_scanned,
        "tokens_scanned": m.tokens_scanned,
        "total": m.total(),
        "windows": m.layout().windows(),
        "dedup_mode": dedup,
        "skipped": outcome.skipped.len(),
    }))
}

fn cmd_render(
    ctx: &mut Ctx,
    dictionary: Option<PathBuf>,
    templates: Vec<PathBuf>,
    category: Option<Category>,
    in_america: bool,
) -> Result<Value, Error> {
    let dict_path = require(
        dictionary,
        ctx.cfg.dictionary.clone(),
        "dictionary (--dict)",
    )?;
    let templates = if templates.is_empty() {
        ctx.cfg.templates.clone()
    } else {
        templates
    };
    if templates.is_empty() {
        return Err(Error::Usage(
            "no templates given (--templates or config)".into(),
        ));
    }
    let categories: Vec<Category> = match category {
        Some(c) if !c.is_demographic() => {
            return Err(Error::Usage(format!("{c} is not a demographic category")))
        }
        Some(c) => vec![c],
        None => Category::DEMOGRAPHIC.to_vec(),
    };
    let bundle = load_dictionary(&dict_path)?;
    let mut counts = BTreeMap::new();
    for path in templates {
        ensure_exists(&path)?;
        let mut set = TemplateSet::load(&path)?;
        if !ctx.cfg.languages.is_empty() && !ctx.cfg.languages.iter().any(|l| l == set.language()) {
            continue;
        }
        if in_america {
            set = set.with_suffix(Some(IN_AMERICA_SUFFIX.to_string()));
        }
        for &cat in &categories {
            let prompts = render_matrix(&set, &bundle, cat)?;
            let name = format!("prompts_{}_{}.jsonl", set.language(), cat);
            counts.insert(name.clone(), prompts.len());
            ctx.write(&name, prompts_to_jsonl(&prompts))?;
        }
    }
    Ok(json!({ "prompts": counts }))
}

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn pick_window(m: &CoOccurrenceMatrix, window: Option<u32>) -> u32 {
    window.unwrap_or_else(|| {
        let ws = m.layout().windows();
        if ws.contains(&PREFERRED_WINDOW) {
            PREFERRED_WINDOW
        } else {
            *ws.last().expect("matrix has windows")
        }
    })
}

fn read_counts(path: &Path) -> Result<CoOccurrenceMatrix, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(CoOccurrenceMatrix::from_json_str(&text)?)
    } else {
        Ok(CoOccurrenceMatrix::read_csv(text.as_bytes())?)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_rank(
    ctx: &mut Ctx,
    source: RankSource,
    input: Option<PathBuf>,
    category: Option<Category>,
    window: Option<u32>,
    model: Option<String>,
    language: Option<String>,
) -> Result<Value, Error> {
    let categories: Vec<Category> = match category {
        Some(c) => vec![c],
        None => Category::DEMOGRAPHIC.to_vec(),
    };
    let mut tables: Vec<(String, RankTable)> = Vec::new();
    match source {
        RankSource::Counts => {
            let path = require(input, ctx.cfg.counts.clone(), "counts file (--input)")?;
            let m = read_counts(&path)?;
            let w = pick_window(&m, window);
            for &cat in &categories {
                let t = rank_from_counts(&m, cat, w)?;
                tables.push((format!("ranks_counts_w{w}_{cat}.csv"), t));
            }
        }
        RankSource::Prevalence => {
            let path = require(
                input,
                ctx.cfg.prevalence.clone(),
                "prevalence file (--input)",
            )?;
            let p = load_prevalence(&path)?;
            for &cat in &categories {
                tables.push((
                    format!("ranks_prevalence_{cat}.csv"),
                    rank_from_prevalence(&p, cat),
                ));
            }
        }
        RankSource::Logits => {
            let path = require(input, ctx.cfg.logits.clone(), "logits file (--input)")?;
            let t = load_logits(&path)?;
            let means = mean_logits(&t)?;
            for (m, lang, cat) in selected_slices(&t, &ctx.cfg, &model, &language, category) {
                let table = rank_from_logits(&means, &m, &lang, cat)?;
                check_mode(&ctx.cfg, &table)?;
                tables.push((
                    format!("ranks_logits_{}_{lang}_{cat}.csv", file_safe(&m)),
                    table,
                ));
            }
        }
    }
    if tables.is_empty() {
        return Err(Error::Usage("no rank tables matched the selection".into()));
    }
    let mut summary = Vec::new();
    for (name, table) in &tables {
        ctx.write(name, table.to_csv_string())?;
        summary.push(json!({
            "file": name,
            "source": table.source,
            "language": table.language,
            "category": table.category,
            "diseases": table.rows.len(),
            "tied_rows": table.rows.values().filter(|r| r.has_ties()).count(),
            "partial_rows": table.rows.values().filter(|r| r.partial).count(),
        }));
    }
    Ok(json!({ "tables": summary }))
}

fn check_mode(cfg: &RunConfig, table: &RankTable) -> Result<(), Error> {
    if let (Some(want), Some(have)) = (cfg.scoring_mode, table.scoring_mode) {
        if want != have {
            return Err(Error::Usage(format!(
                "config expects scoring mode {want}, {} uses {have}",
                table.source
            )));
        }
    }
    Ok(())
}

fn selected_slices(
    t: &LogitTable,
    cfg: &RunConfig,
    model: &Option<String>,
    language: &Option<String>,
    category: Option<Category>,
) -> Vec<(String, String, Category)> {
    t.slices()
        .into_iter()
        .filter(|(m, l, c)| {
            model.as_ref().is_none_or(|want| want == m)
                && language.as_ref().map_or(
                    cfg.languages.is_empty() || cfg.languages.contains(l),
                    |want| want == l,
                )
                && category.is_none_or(|want| want == *c)
        })
        .collect()
}

fn read_rank_table(path: &Path) -> Result<RankTable, Error> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(RankTable::read_csv(file)?)
}

fn tau_csv(rows: &[TauResult]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(crate::rank::RankError::from)?;
    }
    Ok(String::from_utf8(w.into_inner().expect("flush to vec")).expect("utf-8"))
}

fn cmd_compare(ctx: &mut Ctx, left: &Path, right: &Path) -> Result<Value, Error> {
    let l = read_rank_table(left)?;
    let r = read_rank_table(right)?;
    if l.category != r.category {
        return Err(Error::Usage(format!(
            "categories differ: {} vs {}",
            l.category, r.category
        )));
    }
    let ld = l.diseases();
    let rd = r.diseases();
    if ld != rd {
        return Err(crate::stats::StatsError::DiseaseSetMismatch {
            only_left: ld.difference(&rd).map(|s| s.to_string()).collect(),
            only_right: rd.difference(&ld).map(|s| s.to_string()).collect(),
        }
        .into());
    }
    let (l, r) = RankTable::restrict_to_shared(&l, &r);
    let mut taus = compare_tables(&l, &r)?;
    let mean = mean_tau(&taus);
    let mut rows = taus.clone();
    if let Some(mean) = mean {
        rows.push(TauResult {
            left: l.source.clone(),
            right: r.source.clone(),
            disease: "ALL".into(),
            tau: mean,
            n: taus.len(),
        });
    }
    ctx.write("compare_tau.csv", tau_csv(&rows)?)?;

    #[derive(Serialize)]
    struct TallyRow<'a> {
        source: &'a str,
        reference: &'a str,
        category: Category,
        position: Position,
        subgroup: &'a str,
        source_count: usize,
        reference_count: usize,
    }
    let mut tallies = Vec::new();
    for position in Position::ALL {
        let needs = if position == Position::SecondBottom {
            2
        } else {
            1
        };
        if l.rows.values().any(|row| row.len() < needs) {
            continue;
        }
        tallies.push(position_tally(&l, &r, position)?);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in &tallies {
        let mut subgroups: Vec<&String> =
            t.counts.keys().chain(t.reference_counts.keys()).collect();
        subgroups.sort();
        subgroups.dedup();
        for s in subgroups {
            w.serialize(TallyRow {
                source: &t.source,
                reference: &t.reference,
                category: t.category,
                position: t.position,
                subgroup: s,
                source_count: t.counts.get(s).copied().unwrap_or(0),
                reference_count: t.reference_counts.get(s).copied().unwrap_or(0),
            })
            .map_err(crate::rank::RankError::from)?;
        }
    }
    ctx.write(
        "compare_tallies.csv",
        String::from_utf8(w.into_inner().expect("flush to vec")).expect("utf-8"),
    )?;
    taus.sort_by(|a, b| a.disease.cmp(&b.disease));
    let report = json!({
        "left": l.source,
        "right": r.source,
        "category": l.category,
        "mean_tau": mean,
        "per_disease": taus,
        "partial_rows": l.rows.iter().filter(|(_, row)| row.partial).map(|(d, _)| d).collect::<Vec<_>>(),
        "tallies": tallies,
    });
    ctx.write("compare.json", pretty(&report))?;
    Ok(json!({
        "left": report["left"],
        "right": report["right"],
        "mean_tau": mean,
        "match_counts": tallies.iter().map(|t| (t.position.as_str(), t.match_count)).collect::<BTreeMap<_, _>>(),
    }))
}

fn cmd_drift(ctx: &mut Ctx, base: &Path, aligned: &[PathBuf]) -> Result<Value, Error> {
    if aligned.is_empty() {
        return Err(Error::Usage("no aligned tables given (--aligned)".into()));
    }
    let base = read_rank_table(base)?;
    let mut reports = Vec::new();
    for path in aligned {
        reports.push(drift(&base, &read_rank_table(path)?)?);
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        base: &'a str,
        aligned: &'a str,
        language: &'a str,
        category: Category,
        delta: Option<f64>,
        diseases: usize,
        excluded: usize,
    }
    #[derive(Serialize)]
    struct PerDisease<'a> {
        base: &'a str,
        aligned: &'a str,
        disease: &'a str,
        tau: f64,
    }
    let mut summary = csv::Writer::from_writer(Vec::new());
    let mut per = csv::Writer::from_writer(Vec::new());
    for r in &reports {
        summary
            .serialize(Summary {
                base: &r.base_model,
                aligned: &r.aligned_model,
                language: &r.language,
                category: r.category,
                delta: r.delta,
                diseases: r.per_disease_tau.len(),
                excluded: r.excluded.len(),
            })
            .map_err(crate::rank::RankError::from)?;
        for (d, tau) in &r.per_disease_tau {
            per.serialize(PerDisease {
                base: &r.base_model,
                aligned: &r.aligned_model,
                disease: d,
                tau: *tau,
            })
            .map_err(crate::rank::RankError::from)?;
        }
    }
    let into_string =
        |w: csv::Writer<Vec<u8>>| String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    ctx.write("drift.csv", into_string(summary))?;
    ctx.write("drift_per_disease.csv", into_string(per))?;
    ctx.write("drift.json", pretty(&reports))?;
    Ok(json!({
        "base": base.source,
        "delta": reports.iter().map(|r| (r.aligned_model.clone(), r.delta)).collect::<BTreeMap<_, _>>(),
    }))
}

fn cmd_robustness(
    ctx: &mut Ctx,
    logits: Option<PathBuf>,
    model: Option<String>,
    language: Option<String>,
    category: Option<Category>,
) -> Result<Value, Error> {
    let path = require(logits, ctx.cfg.logits.clone(), "logits file (--logits)")?;
    let t = load_logits(&path)?;
    #[derive(Serialize)]
    struct Row<'a> {
        model: &'a str,
        language: &'a str,
        category: Category,
        n_templates: usize,
        diseases: usize,
        top_agreement_mean: f64,
        top_agreement_se: f64,
        pairwise_tau_mean: Option<f64>,
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut details = Vec::new();
    for (m, lang, cat) in selected_slices(&t, &ctx.cfg, &model, &language, category) {
        let top = template_top_agreement(&t, &m, &lang, cat)?;
        let pairwise = if top.n_templates >= 2 {
            Some(template_pairwise_tau(&t, &m, &lang, cat)?)
        } else {
            None
        };
        w.serialize(Row {
            model: &m,
            language: &lang,
            category: cat,
            n_templates: top.n_templates,
            diseases: top.per_disease.len(),
            top_agreement_mean: top.mean,
            top_agreement_se: top.standard_error,
            pairwise_tau_mean: pairwise.as_ref().map(|p| p.mean),
        })
        .map_err(crate::rank::RankError::from)?;
        details.push(json!({ "top_agreement": top, "pairwise_tau": pairwise }));
    }
    if details.is_empty() {
        return Err(Error::Usage("no logit slices matched the selection".into()));
    }
    ctx.write(
        "robustness.csv",
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"),
    )?;
    ctx.write("robustness.json", pretty(&details))?;
    Ok(json!({ "slices": details.len() }))
}

#[derive(Debug, Deserialize)]
struct TauCsvRow {
    left: String,
    right: String,
    disease: String,
    tau: f64,
    n: usize,
}

fn cmd_quartiles(
    ctx: &mut Ctx,
    tau: &Path,
    counts: Option<PathBuf>,
    category: Category,
    window: Option<u32>,
) -> Result<Value, Error> {
    let counts_path = require(counts, ctx.cfg.counts.clone(), "counts file (--counts)")?;
    let file = fs::File::open(tau).map_err(|e| Error::io(tau, e))?;
    let mut taus = Vec::new();
    for row in csv::Reader::from_reader(file).deserialize::<TauCsvRow>() {
        let row = row.map_err(crate::rank::RankError::from)?;
        if row.disease != "ALL" {
            taus.push(TauResult {
                left: row.left,
                right: row.right,
                disease: row.disease,
                tau: row.tau,
                n: row.n,
            });
        }
    }
    let m = read_counts(&counts_path)?;
    let w = pick_window(&m, window);
    if m.layout().window_index(w).is_none() {
        return Err(crate::scanner::ScanError::WindowNotPresent(w).into());
    }
    let totals: BTreeMap<String, u64> = m
        .layout()
        .diseases()
        .iter()
        .filter_map(|d| m.disease_total(d, category, w).map(|t| (d.clone(), t)))
        .collect();
    let quartiles = quartile_tau(&taus, &totals)?;
    #[derive(Serialize)]
    struct Row {
        quartile: usize,
        diseases: usize,
        min_total: Option<u64>,
        max_total: Option<u64>,
        mean_tau: Option<f64>,
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    for q in &quartiles {
        out.serialize(Row {
            quartile: q.quartile,
            diseases: q.diseases.len(),
            min_total: q.min_total,
            max_total: q.max_total,
            mean_tau: q.mean_tau,
        })
        .map_err(crate::rank::RankError::from)?;
    }
    ctx.write(
        "quartiles.csv",
        String::from_utf8(out.into_inner().expect("flush")).expect("utf-8"),
    )?;
    ctx.write("quartiles.json", pretty(&quartiles))?;
    Ok(json!({
        "window": w,
        "category": category,
        "mean_tau": quartiles.iter().map(|q| q.mean_tau).collect::<Vec<_>>(),
    }))
}
