use std::collections::BTreeMap;

use serde::Serialize;

use super::kendall::kendall_tau;
use super::{same_diseases, StatsError};
use crate::dictionary::Category;
use crate::rank::RankTable;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub base_model: String,
    pub aligned_model: String,
    pub language: String,
    pub category: Category,
    pub per_disease_tau: BTreeMap<String, f64>,
    /// Diseases where either ranking is partial; not part of `delta`.
    pub excluded: Vec<String>,
    /// Mean of `per_disease_tau`; `None` when every disease was excluded.
    pub delta: Option<f64>,
}

/// Per-disease tau between a base and an aligned model's rank tables, and
/// their mean.
pub fn drift(base: &RankTable, aligned: &RankTable) -> Result<DriftReport, StatsError> {
    if base.language != aligned.language {
        return Err(StatsError::TableMismatch(format!(
            "languages {} and {}",
            base.language, aligned.language
        )));
    }
    if base.category != aligned.category {
        return Err(StatsError::TableMismatch(format!(
            "categories {} and {}",
            base.category, aligned.category
        )));
    }
    same_diseases(base, aligned)?;
    let mut per_disease_tau = BTreeMap::new();
    let mut excluded = Vec::new();
    for (d, b) in &base.rows {
        let a = &aligned.rows[d];
        if b.partial || a.partial {
            excluded.push(d.clone());
            continue;
        }
        per_disease_tau.insert(d.clone(), kendall_tau(b, a).map_err(|e| e.for_disease(d))?);
    }
    let delta = (!per_disease_tau.is_empty())
        .then(|| per_disease_tau.values().sum::<f64>() / per_disease_tau.len() as f64);
    Ok(DriftReport {
        base_model: base.source.clone(),
        aligned_model: aligned.source.clone(),
        language: base.language.clone(),
        category: base.category,
        per_disease_tau,
        excluded,
        delta,
    })
}
