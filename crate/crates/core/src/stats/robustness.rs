//! Agreement of per-template rankings, before any averaging across templates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::kendall::kendall_tau;
use super::StatsError;
use crate::dictionary::Category;
use crate::logits::LogitTable;
use crate::rank::RankRow;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopAgreement {
    pub model: String,
    pub language: String,
    pub category: Category,
    pub n_templates: usize,
    /// Disease -> number of templates agreeing on the modal top subgroup.
    pub per_disease: BTreeMap<String, usize>,
    pub mean: f64,
    /// Sample standard error over diseases; 0 with fewer than two diseases.
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseTau {
    pub model: String,
    pub language: String,
    pub category: Category,
    pub n_templates: usize,
    /// Disease -> mean tau over all template pairs.
    pub per_disease: BTreeMap<String, f64>,
    pub mean: f64,
}

type TemplateRows = BTreeMap<String, Vec<RankRow>>;

fn per_template_rows(
    t: &LogitTable,
    model: &str,
    language: &str,
    category: Category,
) -> Result<(TemplateRows, usize), StatsError> {
    let scores = t.template_scores(model, language, category)?;
    let mut n_templates = 0;
    let mut out = BTreeMap::new();
    for (disease, subgroups) in scores {
        let templates: BTreeSet<u32> = subgroups.values().flat_map(|m| m.keys().copied()).collect();
        n_templates = templates.len();
        let rows = templates
            .iter()
            .map(|k| RankRow::from_scores(subgroups.iter().map(|(s, m)| (s.as_str(), m[k]))))
            .collect();
        out.insert(disease, rows);
    }
    Ok((out, n_templates))
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// For each disease, the number of templates whose top-ranked subgroup is
/// the most common top subgroup; averaged over diseases.
pub fn template_top_agreement(
    t: &LogitTable,
    model: &str,
    language: &str,
    category: Category,
) -> Result<TopAgreement, StatsError> {
    let (rows, n_templates) = per_template_rows(t, model, language, category)?;
    let per_disease: BTreeMap<String, usize> = rows
        .into_iter()
        .map(|(d, rows)| {
            let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
            for r in &rows {
                *freq.entry(r.order()[0].as_str()).or_default() += 1;
            }
            (d, freq.into_values().max().unwrap_or(0))
        })
        .collect();
    let values: Vec<f64> = per_disease.values().map(|&c| c as f64).collect();
    let (mean, standard_error) = mean_and_se(&values);
    Ok(TopAgreement {
        model: model.to_string(),
        language: language.to_string(),
        category,
        n_templates,
        per_disease,
        mean,
        standard_error,
    })
}

/// Mean Kendall tau over every pair of per-template rankings, per disease
/// and then over diseases.
pub fn template_pairwise_tau(
    t: &LogitTable,
    model: &str,
    language: &str,
    category: Category,
) -> Result<PairwiseTau, StatsError> {
    let (rows, n_templates) = per_template_rows(t, model, language, category)?;
    if n_templates < 2 {
        return Err(StatsError::TooFewTemplates(n_templates));
    }
    let mut per_disease = BTreeMap::new();
    for (d, rows) in rows {
        let mut sum = 0.0;
        let mut pairs = 0usize;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                sum += kendall_tau(&rows[i], &rows[j]).map_err(|e| e.for_disease(&d))?;
                pairs += 1;
            }
        }
        per_disease.insert(d, sum / pairs as f64);
    }
    let mean = per_disease.values().sum::<f64>() / per_disease.len() as f64;
    Ok(PairwiseTau {
        model: model.to_string(),
        language: language.to_string(),
        category,
        n_templates,
        per_disease,
        mean,
    })
}
