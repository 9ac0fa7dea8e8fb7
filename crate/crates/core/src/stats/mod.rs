//! Rank-comparison statistics.

mod drift;
mod kendall;
mod quartile;
mod robustness;
mod tally;

use thiserror::Error;

use crate::logits::LogitError;

pub use drift::{drift, DriftReport};
pub use kendall::{compare_tables, kendall_tau, mean_tau, tau_from_ranks, TauResult};
pub use quartile::{quartile_tau, Quartile};
pub use robustness::{template_pairwise_tau, template_top_agreement, PairwiseTau, TopAgreement};
pub use tally::{position_tally, Position, PositionTally};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("{disease}: rankings cover different subgroups ({left:?} vs {right:?})")]
    SubgroupMismatch {
        disease: String,
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("{disease}: need at least {needed} subgroups, have {n}")]
    TooFewSubgroups {
        disease: String,
        n: usize,
        needed: usize,
    },
    #[error("disease sets differ: only left {only_left:?}, only right {only_right:?}")]
    DiseaseSetMismatch {
        only_left: Vec<String>,
        only_right: Vec<String>,
    },
    #[error("tables are not comparable: {0}")]
    TableMismatch(String),
    #[error("no input")]
    EmptyInput,
    #[error("no total count for disease {0}")]
    MissingTotal(String),
    #[error("need at least 2 templates, have {0}")]
    TooFewTemplates(usize),
    #[error(transparent)]
    Logits(#[from] LogitError),
}

impl StatsError {
    fn for_disease(self, d: &str) -> Self {
        match self {
            StatsError::SubgroupMismatch { left, right, .. } => StatsError::SubgroupMismatch {
                disease: d.to_string(),
                left,
                right,
            },
            StatsError::TooFewSubgroups { n, needed, .. } => StatsError::TooFewSubgroups {
                disease: d.to_string(),
                n,
                needed,
            },
            other => other,
        }
    }
}

fn same_diseases(
    left: &crate::rank::RankTable,
    right: &crate::rank::RankTable,
) -> Result<(), StatsError> {
    let l = left.diseases();
    let r = right.diseases();
    if l != r {
        return Err(StatsError::DiseaseSetMismatch {
            only_left: l.difference(&r).map(|s| s.to_string()).collect(),
            only_right: r.difference(&l).map(|s| s.to_string()).collect(),
        });
    }
    Ok(())
}
