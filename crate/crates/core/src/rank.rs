//! Rank tables shared by every data source (counts, logits, prevalence).
//!
//! Rank 1 is the most prevalent subgroup. Tied subgroups share the minimum
//! rank of their group and are flagged; the display order breaks ties by
//! ascending subgroup id.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::Category;
use crate::logits::ScoringMode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankRow {
    order: Vec<String>,
    ranks: BTreeMap<String, u32>,
    tied: BTreeSet<String>,
    /// Some subgroups of the category had no data for this disease.
    pub partial: bool,
}

impl RankRow {
    /// Ranks by descending score. Scores must be comparable (no NaN).
    pub fn from_scores<I, S>(scores: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut items: Vec<(String, f64)> =
            scores.into_iter().map(|(s, v)| (s.into(), v)).collect();
        items.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        let mut ranks = BTreeMap::new();
        let mut tied = BTreeSet::new();
        let mut group_start = 0;
        for i in 0..items.len() {
            if i > 0 && items[i].1 != items[i - 1].1 {
                group_start = i;
            }
            ranks.insert(items[i].0.clone(), group_start as u32 + 1);
            if (i > 0 && items[i].1 == items[i - 1].1)
                || (i + 1 < items.len() && items[i].1 == items[i + 1].1)
            {
                tied.insert(items[i].0.clone());
            }
        }
        let order = items.into_iter().map(|(s, _)| s).collect();
        Self {
            order,
            ranks,
            tied,
            partial: false,
        }
    }

    /// Builds a row from explicit rank numbers (lower = more prevalent).
    pub fn from_ranks<I, S>(ranks: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        Self::from_scores(ranks.into_iter().map(|(s, r)| (s, -(r as f64))))
    }

    pub fn with_partial(mut self, partial: bool) -> Self {
        self.partial = partial;
        self
    }

    pub fn rank(&self, subgroup: &str) -> Option<u32> {
        self.ranks.get(subgroup).copied()
    }

    pub fn ranks(&self) -> &BTreeMap<String, u32> {
        &self.ranks
    }

    /// Subgroups from most to least prevalent.
    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn is_tied(&self, subgroup: &str) -> bool {
        self.tied.contains(subgroup)
    }

    pub fn has_ties(&self) -> bool {
        !self.tied.is_empty()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn subgroups(&self) -> BTreeSet<&str> {
        self.ranks.keys().map(String::as_str).collect()
    }

    /// Re-ranks over the subgroups in `keep`, preserving relative order and ties.
    pub fn restrict(&self, keep: &BTreeSet<&str>) -> RankRow {
        let dropped = self.ranks.keys().any(|s| !keep.contains(s.as_str()));
        RankRow::from_ranks(
            self.ranks
                .iter()
                .filter(|(s, _)| keep.contains(s.as_str()))
                .map(|(s, r)| (s.clone(), *r)),
        )
        .with_partial(self.partial || dropped)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    /// Model id or data source (e.g. `pile`, `nhis`).
    pub source: String,
    pub language: String,
    pub category: Category,
    /// Set for logit-derived tables.
    pub scoring_mode: Option<ScoringMode>,
    pub rows: BTreeMap<String, RankRow>,
}

#[derive(Debug, Error)]
pub enum RankError {
    #[error("rank csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("rank csv line {line}: {message}")]
    Format { line: u64, message: String },
    #[error("rank csv is empty")]
    Empty,
}

#[derive(Debug, Serialize, Deserialize)]
struct RankCsvRow {
    source: String,
    language: String,
    category: Category,
    scoring_mode: Option<ScoringMode>,
    disease: String,
    subgroup: String,
    rank: u32,
    tied: bool,
    partial: bool,
}

pub const RANK_CSV_HEADER_COMMENT: &str = "# rank 1 = most prevalent (highest count, mean score or rate); tied subgroups share the minimum rank\n";

impl RankTable {
    pub fn new(source: impl Into<String>, language: impl Into<String>, category: Category) -> Self {
        Self {
            source: source.into(),
            language: language.into(),
            category,
            scoring_mode: None,
            rows: BTreeMap::new(),
        }
    }

    pub fn diseases(&self) -> BTreeSet<&str> {
        self.rows.keys().map(String::as_str).collect()
    }

    pub fn row(&self, disease: &str) -> Option<&RankRow> {
        self.rows.get(disease)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), RankError> {
        out.write_all(RANK_CSV_HEADER_COMMENT.as_bytes())
            .map_err(csv::Error::from)?;
        let mut w = csv::Writer::from_writer(out);
        for (disease, row) in &self.rows {
            let mut subgroups: Vec<(&String, &u32)> = row.ranks.iter().collect();
            subgroups.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
            for (subgroup, rank) in subgroups {
                w.serialize(RankCsvRow {
                    source: self.source.clone(),
                    language: self.language.clone(),
                    category: self.category,
                    scoring_mode: self.scoring_mode,
                    disease: disease.clone(),
                    subgroup: subgroup.clone(),
                    rank: *rank,
                    tied: row.is_tied(subgroup),
                    partial: row.partial,
                })?;
            }
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8 csv")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, RankError> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(input);
        let mut table: Option<RankTable> = None;
        let mut pending: BTreeMap<String, (Vec<(String, u32)>, bool)> = BTreeMap::new();
        let headers = r.headers()?.clone();
        for record in r.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let row: RankCsvRow = record.deserialize(Some(&headers))?;
            let t = table.get_or_insert_with(|| RankTable {
                source: row.source.clone(),
                language: row.language.clone(),
                category: row.category,
                scoring_mode: row.scoring_mode,
                rows: BTreeMap::new(),
            });
            if t.source != row.source
                || t.language != row.language
                || t.category != row.category
                || t.scoring_mode != row.scoring_mode
            {
                return Err(RankError::Format {
                    line,
                    message: format!(
                        "mixed tables in one file ({}/{}/{} vs {}/{}/{})",
                        t.source, t.language, t.category, row.source, row.language, row.category
                    ),
                });
            }
            let entry = pending.entry(row.disease).or_default();
            entry.0.push((row.subgroup, row.rank));
            entry.1 |= row.partial;
        }
        let mut table = table.ok_or(RankError::Empty)?;
        table.rows = pending
            .into_iter()
            .map(|(d, (ranks, partial))| (d, RankRow::from_ranks(ranks).with_partial(partial)))
            .collect();
        Ok(table)
    }

    /// Restricts both tables to their shared subgroups per disease, over the
    /// diseases present in both.
    pub fn restrict_to_shared(left: &RankTable, right: &RankTable) -> (RankTable, RankTable) {
        let mut l = RankTable {
            rows: BTreeMap::new(),
            ..left.clone()
        };
        let mut r = RankTable {
            rows: BTreeMap::new(),
            ..right.clone()
        };
        for (disease, lrow) in &left.rows {
            let Some(rrow) = right.rows.get(disease) else {
                continue;
            };
            let shared: BTreeSet<&str> = lrow
                .subgroups()
                .intersection(&rrow.subgroups())
                .copied()
                .collect();
            l.rows.insert(disease.clone(), lrow.restrict(&shared));
            r.rows.insert(disease.clone(), rrow.restrict(&shared));
        }
        (l, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descending_scores() {
        let row = RankRow::from_scores([
            ("white", -1.0),
            ("black", -1.5),
            ("hispanic", -4.0),
            ("asian", -0.5),
            ("indigenous", -3.0),
            ("pacific_islander", -5.0),
        ]);
        assert_eq!(
            row.order(),
            [
                "asian",
                "white",
                "black",
                "indigenous",
                "hispanic",
                "pacific_islander"
            ]
        );
        assert_eq!(row.rank("pacific_islander"), Some(6));
        assert!(!row.has_ties());
    }

    #[test]
    fn min_rank_ties() {
        let row = RankRow::from_scores([
            ("w", 180.0),
            ("b", 110.0),
            ("h", 270.0),
            ("a", 180.0),
            ("i", 250.0),
        ]);
        assert_eq!(row.rank("h"), Some(1));
        assert_eq!(row.rank("i"), Some(2));
        assert_eq!(row.rank("a"), Some(3));
        assert_eq!(row.rank("w"), Some(3));
        assert_eq!(row.rank("b"), Some(5));
        assert!(row.is_tied("a") && row.is_tied("w") && !row.is_tied("b"));
        assert_eq!(row.order(), ["h", "i", "a", "w", "b"]);
    }

    #[test]
    fn all_equal() {
        let row = RankRow::from_scores([("a", 1.0), ("b", 1.0), ("c", 1.0)]);
        assert!(row.ranks().values().all(|&r| r == 1));
        assert!(row.is_tied("a") && row.is_tied("b") && row.is_tied("c"));
    }

    #[test]
    fn restrict_reranks() {
        let row = RankRow::from_ranks([("a", 1), ("b", 2), ("c", 3)]);
        let keep: BTreeSet<&str> = ["a", "c"].into_iter().collect();
        let r = row.restrict(&keep);
        assert_eq!(r.rank("c"), Some(2));
        assert!(r.partial);
    }

    #[test]
    fn csv_round_trip() {
        let mut t = RankTable::new("pile", "en", Category::Gender);
        t.rows.insert(
            "asthma".into(),
            RankRow::from_ranks([("male", 1), ("female", 2)]),
        );
        t.rows.insert(
            "gout".into(),
            RankRow::from_ranks([("male", 1), ("female", 1)]).with_partial(true),
        );
        let text = t.to_csv_string();
        assert!(text.starts_with("# rank 1 = most prevalent"));
        let back = RankTable::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, t);
    }
}
