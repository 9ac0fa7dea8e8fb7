//! Per-template sequence scores and their per-pair means.
//!
//! A score is the log-likelihood of a rendered sentence under a model, in
//! natural-log units, reduced either by summing token log-probabilities
//! (`sum_logprob`) or averaging them (`mean_logprob`). The reduction travels
//! with every record; aggregating across reductions is an error.
//!
//! Wire format, one JSON object per line:
//! `{"v": 1, "model": str, "language": str, "disease": str, "subgroup": str,
//!   "category": str, "template": int, "score": float, "scoring_mode": str}`

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::dictionary::Category;
use crate::rank::{RankRow, RankTable};

pub const WIRE_VERSION: u32 = 1;

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum ScoringMode {
    #[default]
    SumLogprob,
    MeanLogprob,
}

impl ScoringMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoringMode::SumLogprob => "sum_logprob",
            ScoringMode::MeanLogprob => "mean_logprob",
        }
    }
}

impl fmt::Display for ScoringMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScoringMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "sum_logprob" => Ok(ScoringMode::SumLogprob),
            "mean_logprob" => Ok(ScoringMode::MeanLogprob),
            other => Err(format!("unknown scoring mode `{other}`")),
        }
    }
}

/// (model, language, disease, subgroup, template)
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecordKey {
    pub model: String,
    pub language: String,
    pub disease: String,
    pub subgroup: String,
    pub template: u32,
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/{}/t{}",
            self.model, self.language, self.disease, self.subgroup, self.template
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitRecord {
    pub model: String,
    pub language: String,
    pub disease: String,
    pub subgroup: String,
    pub category: Category,
    pub template: u32,
    pub score: f64,
    pub scoring_mode: ScoringMode,
}

impl LogitRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            model: self.model.clone(),
            language: self.language.clone(),
            disease: self.disease.clone(),
            subgroup: self.subgroup.clone(),
            template: self.template,
        }
    }

    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            v: u32,
            #[serde(flatten)]
            record: &'a LogitRecord,
        }
        serde_json::to_string(&Wire {
            v: WIRE_VERSION,
            record: self,
        })
        .expect("record serializes")
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord {
    v: u32,
    model: String,
    language: String,
    disease: String,
    subgroup: String,
    category: Category,
    template: u32,
    #[serde(deserialize_with = "lenient_float")]
    score: f64,
    scoring_mode: ScoringMode,
}

/// Accepts JSON numbers plus the strings `NaN`, `Infinity`, `-Infinity`, so
/// non-finite scores surface as a validation error rather than a parse error.
fn lenient_float<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }
    match Repr::deserialize(d)? {
        Repr::Num(v) => Ok(v),
        Repr::Text(s) => match s.to_ascii_lowercase().as_str() {
            "nan" => Ok(f64::NAN),
            "infinity" | "inf" => Ok(f64::INFINITY),
            "-infinity" | "-inf" => Ok(f64::NEG_INFINITY),
            _ => Err(serde::de::Error::custom(format!(
                "score `{s}` is not a number"
            ))),
        },
    }
}

/// Python's `json` module writes bare `NaN` / `Infinity`; quote them so the
/// lenient float parser sees a string.
fn quote_bare_non_finite(line: &str) -> std::borrow::Cow<'_, str> {
    if !(line.contains("NaN") || line.contains("Infinity")) {
        return line.into();
    }
    let mut out = String::with_capacity(line.len() + 4);
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = line;
    while let Some(ch) = rest.chars().next() {
        if in_string {
            out.push(ch);
            if escaped {
                escaped = false;
            } else if ch == '\\' {
                escaped = true;
            } else if ch == '"' {
                in_string = false;
            }
            rest = &rest[ch.len_utf8()..];
            continue;
        }
        if ch == '"' {
            in_string = true;
            out.push(ch);
            rest = &rest[1..];
            continue;
        }
        let token = ["-Infinity", "Infinity", "NaN"]
            .into_iter()
            .find(|t| rest.starts_with(t));
        if let Some(t) = token {
            out.push('"');
            out.push_str(t);
            out.push('"');
            rest = &rest[t.len()..];
        } else {
            out.push(ch);
            rest = &rest[ch.len_utf8()..];
        }
    }
    out.into()
}

#[derive(Debug, Error)]
pub enum LogitError {
    #[error("cannot read logits {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("logits line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate logit record {0}")]
    DuplicateRecord(RecordKey),
    #[error("non-finite score for {0}")]
    NonFiniteScore(RecordKey),
    #[error("{model}/{language}: {disease}/{subgroup} has {found} templates, expected {expected}")]
    IncompleteTemplates {
        model: String,
        language: String,
        disease: String,
        subgroup: String,
        found: usize,
        expected: usize,
    },
    #[error("{model}/{language} mixes scoring modes {first} and {second}")]
    MixedScoringMode {
        model: String,
        language: String,
        first: ScoringMode,
        second: ScoringMode,
    },
    #[error("{model}/{language}/{category}: disease {disease} lacks subgroup {subgroup}")]
    MissingSubgroup {
        model: String,
        language: String,
        category: Category,
        disease: String,
        subgroup: String,
    },
    #[error("no records for {model}/{language}/{category}")]
    EmptySlice {
        model: String,
        language: String,
        category: Category,
    },
    #[error("{0} is not a demographic category")]
    NotDemographic(Category),
}

/// disease -> subgroup -> template -> score
pub type TemplateScores = BTreeMap<String, BTreeMap<String, BTreeMap<u32, f64>>>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogitTable {
    records: Vec<LogitRecord>,
}

pub fn load_logits(path: impl AsRef<Path>) -> Result<LogitTable, LogitError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| LogitError::Io {
        path: path.display().to_string(),
        source,
    })?;
    LogitTable::from_jsonl(&text)
}

impl LogitTable {
    pub fn from_jsonl(text: &str) -> Result<Self, LogitError> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let wire: WireRecord =
                serde_json::from_str(&quote_bare_non_finite(line)).map_err(|e| {
                    LogitError::Parse {
                        line: i + 1,
                        message: e.to_string(),
                    }
                })?;
            if wire.v != WIRE_VERSION {
                return Err(LogitError::Parse {
                    line: i + 1,
                    message: format!("unsupported contract version {}", wire.v),
                });
            }
            records.push(LogitRecord {
                model: wire.model,
                language: wire.language,
                disease: wire.disease,
                subgroup: wire.subgroup,
                category: wire.category,
                template: wire.template,
                score: wire.score,
                scoring_mode: wire.scoring_mode,
            });
        }
        Self::from_records(records)
    }

    /// Validates uniqueness, finiteness and demographic categories.
    pub fn from_records(records: Vec<LogitRecord>) -> Result<Self, LogitError> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !r.score.is_finite() {
                return Err(LogitError::NonFiniteScore(r.key()));
            }
            if !r.category.is_demographic() {
                return Err(LogitError::NotDemographic(r.category));
            }
            if !seen.insert(r.key()) {
                return Err(LogitError::DuplicateRecord(r.key()));
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[LogitRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn models(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.model.as_str()).collect()
    }

    pub fn languages(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.language.as_str()).collect()
    }

    /// Distinct (model, language, category) slices present.
    pub fn slices(&self) -> BTreeSet<(String, String, Category)> {
        self.records
            .iter()
            .map(|r| (r.model.clone(), r.language.clone(), r.category))
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out
    }

    fn slice<'a>(
        &'a self,
        model: &'a str,
        language: &'a str,
        category: Category,
    ) -> impl Iterator<Item = &'a LogitRecord> + 'a {
        self.records
            .iter()
            .filter(move |r| r.model == model && r.language == language && r.category == category)
    }

    /// Template scores of one slice.
    /// Every (disease, subgroup) pair must carry the same template indices.
    pub fn template_scores(
        &self,
        model: &str,
        language: &str,
        category: Category,
    ) -> Result<TemplateScores, LogitError> {
        let mut out = TemplateScores::new();
        let mut mode = None;
        for r in self.slice(model, language, category) {
            check_mode(&mut mode, r)?;
            out.entry(r.disease.clone())
                .or_default()
                .entry(r.subgroup.clone())
                .or_default()
                .insert(r.template, r.score);
        }
        if out.is_empty() {
            return Err(LogitError::EmptySlice {
                model: model.to_string(),
                language: language.to_string(),
                category,
            });
        }
        let all_templates: BTreeSet<u32> = out
            .values()
            .flat_map(|s| s.values())
            .flat_map(|t| t.keys().copied())
            .collect();
        for (disease, subgroups) in &out {
            for (subgroup, templates) in subgroups {
                if templates.len() != all_templates.len() {
                    return Err(LogitError::IncompleteTemplates {
                        model: model.to_string(),
                        language: language.to_string(),
                        disease: disease.clone(),
                        subgroup: subgroup.clone(),
                        found: templates.len(),
                        expected: all_templates.len(),
                    });
                }
            }
        }
        Ok(out)
    }
}

fn check_mode(mode: &mut Option<ScoringMode>, r: &LogitRecord) -> Result<(), LogitError> {
    match *mode {
        None => *mode = Some(r.scoring_mode),
        Some(m) if m != r.scoring_mode => {
            return Err(LogitError::MixedScoringMode {
                model: r.model.clone(),
                language: r.language.clone(),
                first: m,
                second: r.scoring_mode,
            })
        }
        _ => {}
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanLogit {
    pub model: String,
    pub language: String,
    pub category: Category,
    pub disease: String,
    pub subgroup: String,
    pub mean: f64,
    pub n_templates: usize,
    pub scoring_mode: ScoringMode,
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean score across templates for every (model, language, disease,
/// subgroup), ordered by model, language, category, disease, subgroup.
pub fn mean_logits(t: &LogitTable) -> Result<Vec<MeanLogit>, LogitError> {
    let mut modes: BTreeMap<(&str, &str), Option<ScoringMode>> = BTreeMap::new();
    for r in t.records() {
        check_mode(modes.entry((&r.model, &r.language)).or_default(), r)?;
    }
    let mut out = Vec::new();
    for (model, language, category) in t.slices() {
        let scores = t.template_scores(&model, &language, category)?;
        let mode = modes[&(model.as_str(), language.as_str())].expect("slice has records");
        for (disease, subgroups) in scores {
            for (subgroup, templates) in subgroups {
                let n = templates.len();
                out.push(MeanLogit {
                    model: model.clone(),
                    language: language.clone(),
                    category,
                    disease: disease.clone(),
                    subgroup,
                    mean: compensated_sum(templates.into_values()) / n as f64,
                    n_templates: n,
                    scoring_mode: mode,
                });
            }
        }
    }
    Ok(out)
}

/// Ranks subgroups by descending mean score per disease. The subgroup set
/// is every subgroup seen in the slice; each disease must cover all of them.
pub fn rank_from_logits(
    means: &[MeanLogit],
    model: &str,
    language: &str,
    category: Category,
) -> Result<RankTable, LogitError> {
    let slice: Vec<&MeanLogit> = means
        .iter()
        .filter(|m| m.model == model && m.language == language && m.category == category)
        .collect();
    let Some(first) = slice.first() else {
        return Err(LogitError::EmptySlice {
            model: model.to_string(),
            language: language.to_string(),
            category,
        });
    };
    let subgroups: BTreeSet<&str> = slice.iter().map(|m| m.subgroup.as_str()).collect();
    let mut per_disease: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
    for m in &slice {
        if m.scoring_mode != first.scoring_mode {
            return Err(LogitError::MixedScoringMode {
                model: model.to_string(),
                language: language.to_string(),
                first: first.scoring_mode,
                second: m.scoring_mode,
            });
        }
        per_disease
            .entry(&m.disease)
            .or_default()
            .push((&m.subgroup, m.mean));
    }
    let mut table = RankTable::new(model, language, category);
    table.scoring_mode = Some(first.scoring_mode);
    for (disease, scores) in per_disease {
        let have: BTreeSet<&str> = scores.iter().map(|(s, _)| *s).collect();
        if let Some(missing) = subgroups.difference(&have).next() {
            return Err(LogitError::MissingSubgroup {
                model: model.to_string(),
                language: language.to_string(),
                category,
                disease: disease.to_string(),
                subgroup: missing.to_string(),
            });
        }
        table
            .rows
            .insert(disease.to_string(), RankRow::from_scores(scores));
    }
    Ok(table)
}
