use std::collections::BTreeMap;

use serde::Serialize;

use super::kendall::TauResult;
use super::StatsError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quartile {
    /// 1 = lowest totals.
    pub quartile: usize,
    pub diseases: Vec<String>,
    pub min_total: Option<u64>,
    pub max_total: Option<u64>,
    /// `None` for an empty bin (fewer than four diseases).
    pub mean_tau: Option<f64>,
}

/// Sorts diseases by total co-occurrence count (ascending, ties by id) and
/// splits them into four equal bins, the remainder going to the lowest bins.
pub fn quartile_tau(
    taus: &[TauResult],
    totals: &BTreeMap<String, u64>,
) -> Result<Vec<Quartile>, StatsError> {
    if taus.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let mut items = Vec::with_capacity(taus.len());
    for t in taus {
        let total = *totals
            .get(&t.disease)
            .ok_or_else(|| StatsError::MissingTotal(t.disease.clone()))?;
        items.push((total, t.disease.as_str(), t.tau));
    }
    items.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let n = items.len();
    let mut out = Vec::with_capacity(4);
    let mut start = 0;
    for q in 0..4 {
        let size = n / 4 + usize::from(q < n % 4);
        let bin = &items[start..start + size];
        start += size;
        out.push(Quartile {
            quartile: q + 1,
            diseases: bin.iter().map(|(_, d, _)| d.to_string()).collect(),
            min_total: bin.first().map(|b| b.0),
            max_total: bin.last().map(|b| b.0),
            mean_tau: (!bin.is_empty())
                .then(|| bin.iter().map(|b| b.2).sum::<f64>() / bin.len() as f64),
        });
    }
    Ok(out)
}
