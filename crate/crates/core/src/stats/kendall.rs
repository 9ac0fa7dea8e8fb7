use serde::Serialize;

use super::{same_diseases, StatsError};
use crate::rank::{RankRow, RankTable};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauResult {
    pub left: String,
    pub right: String,
    pub disease: String,
    pub tau: f64,
    pub n: usize,
}

fn sign(a: u32, b: u32) -> i64 {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

/// Tau-a over two aligned rank vectors: `2 / (n(n-1)) * sum_{k<l} sgn(x_k - x_l) sgn(y_k - y_l)`.
/// Tied pairs contribute zero and the denominator is not corrected.
pub fn tau_from_ranks(x: &[u32], y: &[u32]) -> f64 {
    assert_eq!(x.len(), y.len(), "rank vectors differ in length");
    let n = x.len();
    assert!(n >= 2, "tau needs at least two items");
    let mut s: i64 = 0;
    for k in 0..n {
        for l in k + 1..n {
            s += sign(x[k], x[l]) * sign(y[k], y[l]);
        }
    }
    2.0 * s as f64 / (n * (n - 1)) as f64
}

/// Tau-a between two rankings of the same subgroup set.
pub fn kendall_tau(x: &RankRow, y: &RankRow) -> Result<f64, StatsError> {
    if x.subgroups() != y.subgroups() {
        return Err(StatsError::SubgroupMismatch {
            disease: String::new(),
            left: x.ranks().keys().cloned().collect(),
            right: y.ranks().keys().cloned().collect(),
        });
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSubgroups {
            disease: String::new(),
            n: x.len(),
            needed: 2,
        });
    }
    let xs: Vec<u32> = x.ranks().values().copied().collect();
    let ys: Vec<u32> = x
        .ranks()
        .keys()
        .map(|s| y.rank(s).expect("same subgroups"))
        .collect();
    Ok(tau_from_ranks(&xs, &ys))
}

/// Per-disease tau between two tables over the same diseases.
pub fn compare_tables(left: &RankTable, right: &RankTable) -> Result<Vec<TauResult>, StatsError> {
    same_diseases(left, right)?;
    left.rows
        .iter()
        .map(|(d, lrow)| {
            let rrow = &right.rows[d];
            let tau = kendall_tau(lrow, rrow).map_err(|e| e.for_disease(d))?;
            Ok(TauResult {
                left: left.source.clone(),
                right: right.source.clone(),
                disease: d.clone(),
                tau,
                n: lrow.len(),
            })
        })
        .collect()
}

pub fn mean_tau(results: &[TauResult]) -> Option<f64> {
    if results.is_empty() {
        return None;
    }
    Some(results.iter().map(|r| r.tau).sum::<f64>() / results.len() as f64)
}
