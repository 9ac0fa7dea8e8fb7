use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{same_diseases, StatsError};
use crate::dictionary::Category;
use crate::rank::{RankRow, RankTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Top,
    Bottom,
    SecondBottom,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Top, Position::Bottom, Position::SecondBottom];

    pub fn as_str(self) -> &'static str {
        match self {
            Position::Top => "top",
            Position::Bottom => "bottom",
            Position::SecondBottom => "second_bottom",
        }
    }

    fn index(self, n: usize) -> Option<usize> {
        match self {
            Position::Top => (n >= 1).then_some(0),
            Position::Bottom => (n >= 1).then(|| n - 1),
            Position::SecondBottom => (n >= 2).then(|| n - 2),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "top" => Ok(Position::Top),
            "bottom" => Ok(Position::Bottom),
            "second_bottom" => Ok(Position::SecondBottom),
            other => Err(format!("unknown position `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionTally {
    pub source: String,
    pub reference: String,
    pub category: Category,
    pub position: Position,
    /// Subgroup -> diseases where it holds `position` in the source.
    pub counts: BTreeMap<String, usize>,
    pub reference_counts: BTreeMap<String, usize>,
    /// Diseases where both tables put the same subgroup at `position`.
    pub match_count: usize,
    /// Diseases whose holder is tied in either table; never counted as matches.
    pub ambiguous: Vec<String>,
}

fn holder<'a>(row: &'a RankRow, position: Position, disease: &str) -> Result<&'a str, StatsError> {
    let needed = if position == Position::SecondBottom {
        2
    } else {
        1
    };
    let idx = position
        .index(row.len())
        .ok_or_else(|| StatsError::TooFewSubgroups {
            disease: disease.to_string(),
            n: row.len(),
            needed,
        })?;
    Ok(&row.order()[idx])
}

/// Counts which subgroup holds `position` per disease in `source` and
/// `reference`, and how often they agree. A holder tied with another subgroup
/// is still counted (display order breaks the tie) but the disease is marked
/// ambiguous.
pub fn position_tally(
    source: &RankTable,
    reference: &RankTable,
    position: Position,
) -> Result<PositionTally, StatsError> {
    same_diseases(source, reference)?;
    let mut tally = PositionTally {
        source: source.source.clone(),
        reference: reference.source.clone(),
        category: source.category,
        position,
        counts: BTreeMap::new(),
        reference_counts: BTreeMap::new(),
        match_count: 0,
        ambiguous: Vec::new(),
    };
    for (d, srow) in &source.rows {
        let rrow = &reference.rows[d];
        if srow.subgroups() != rrow.subgroups() {
            return Err(StatsError::SubgroupMismatch {
                disease: d.clone(),
                left: srow.ranks().keys().cloned().collect(),
                right: rrow.ranks().keys().cloned().collect(),
            });
        }
        let s = holder(srow, position, d)?;
        let r = holder(rrow, position, d)?;
        *tally.counts.entry(s.to_string()).or_default() += 1;
        *tally.reference_counts.entry(r.to_string()).or_default() += 1;
        if srow.is_tied(s) || rrow.is_tied(r) {
            tally.ambiguous.push(d.clone());
        } else if s == r {
            tally.match_count += 1;
        }
    }
    Ok(tally)
}
