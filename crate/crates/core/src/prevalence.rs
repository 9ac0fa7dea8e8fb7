//! Real-world prevalence tables, in age-adjusted cases per 10,000 persons.
//!
//! CSV columns: `disease,subgroup,category,rate_per_10k,source,year`. An empty
//! `rate_per_10k` marks a subgroup with no published figure; such subgroups
//! are left out of the ranking and the disease row is flagged partial.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::Category;
use crate::rank::{RankRow, RankTable};

pub const PER: f64 = 10_000.0;

#[derive(Debug, Error)]
pub enum PrevalenceError {
    #[error("cannot open prevalence {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("prevalence csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("prevalence line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("negative rate {rate} for {disease}/{subgroup} (line {line})")]
    NegativeRate {
        line: u64,
        disease: String,
        subgroup: String,
        rate: f64,
    },
    #[error("denominator must be positive, got {0}")]
    ZeroDenominator(f64),
}

/// Rescales `raw_rate` cases per `denominator` persons to cases per 10,000.
pub fn normalize_rate(raw_rate: f64, denominator: f64) -> Result<f64, PrevalenceError> {
    if denominator.is_nan() || denominator <= 0.0 {
        return Err(PrevalenceError::ZeroDenominator(denominator));
    }
    if denominator == PER {
        return Ok(raw_rate);
    }
    Ok(raw_rate * (PER / denominator))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceRow {
    pub disease: String,
    pub subgroup: String,
    pub category: Category,
    pub rate_per_10k: Option<f64>,
    pub source: String,
    pub year: Option<i32>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrevalenceTable {
    rows: BTreeMap<(String, Category, String), PrevalenceRow>,
}

pub fn load_prevalence(path: impl AsRef<Path>) -> Result<PrevalenceTable, PrevalenceError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| PrevalenceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    PrevalenceTable::read_csv(file)
}

impl PrevalenceTable {
    pub fn from_rows(
        rows: impl IntoIterator<Item = PrevalenceRow>,
    ) -> Result<Self, PrevalenceError> {
        let mut t = Self::default();
        for (i, row) in rows.into_iter().enumerate() {
            t.insert(row, i as u64 + 1)?;
        }
        Ok(t)
    }

    fn insert(&mut self, row: PrevalenceRow, line: u64) -> Result<(), PrevalenceError> {
        if let Some(rate) = row.rate_per_10k {
            if !rate.is_finite() {
                return Err(PrevalenceError::Parse {
                    line,
                    message: format!("rate {rate} is not finite"),
                });
            }
            if rate < 0.0 {
                return Err(PrevalenceError::NegativeRate {
                    line,
                    disease: row.disease,
                    subgroup: row.subgroup,
                    rate,
                });
            }
        }
        if !row.category.is_demographic() {
            return Err(PrevalenceError::Parse {
                line,
                message: format!("category {} is not demographic", row.category),
            });
        }
        let key = (row.disease.clone(), row.category, row.subgroup.clone());
        if self.rows.contains_key(&key) {
            return Err(PrevalenceError::Parse {
                line,
                message: format!("duplicate row {}/{}", row.disease, row.subgroup),
            });
        }
        self.rows.insert(key, row);
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, PrevalenceError> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        let mut t = Self::default();
        for record in r.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let row: PrevalenceRow =
                record
                    .deserialize(Some(&headers))
                    .map_err(|e| PrevalenceError::Parse {
                        line,
                        message: e.to_string(),
                    })?;
            t.insert(row, line)?;
        }
        Ok(t)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), PrevalenceError> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows.values() {
            w.serialize(row)?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8 csv")
    }

    pub fn rows(&self) -> impl Iterator<Item = &PrevalenceRow> {
        self.rows.values()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn diseases(&self) -> BTreeSet<&str> {
        self.rows.keys().map(|(d, _, _)| d.as_str()).collect()
    }

    pub fn rate(&self, disease: &str, category: Category, subgroup: &str) -> Option<f64> {
        self.rows
            .get(&(disease.to_string(), category, subgroup.to_string()))
            .and_then(|r| r.rate_per_10k)
    }

    /// Every rate multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut t = self.clone();
        for row in t.rows.values_mut() {
            row.rate_per_10k = row.rate_per_10k.map(|r| r * k);
        }
        t
    }
}

/// Gold ranks: descending rate per disease. The subgroup universe is every
/// subgroup of `category` appearing anywhere in the table; a disease lacking
/// a rate for any of them is ranked over the rest and flagged partial.
pub fn rank_from_prevalence(t: &PrevalenceTable, category: Category) -> RankTable {
    let universe: BTreeSet<&str> = t
        .rows
        .values()
        .filter(|r| r.category == category)
        .map(|r| r.subgroup.as_str())
        .collect();
    let mut per_disease: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
    for row in t.rows.values().filter(|r| r.category == category) {
        let entry = per_disease.entry(&row.disease).or_default();
        if let Some(rate) = row.rate_per_10k {
            entry.push((&row.subgroup, rate));
        }
    }
    let mut table = RankTable::new("nhis", "en", category);
    for (disease, rates) in per_disease {
        if rates.is_empty() {
            continue;
        }
        let partial = rates.len() < universe.len();
        table.rows.insert(
            disease.to_string(),
            RankRow::from_scores(rates).with_partial(partial),
        );
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(disease: &str, subgroup: &str, category: Category, rate: Option<f64>) -> PrevalenceRow {
        PrevalenceRow {
            disease: disease.into(),
            subgroup: subgroup.into(),
            category,
            rate_per_10k: rate,
            source: "NHIS/CDC".into(),
            year: None,
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_rate(7.5, 100.0).unwrap(), 750.0);
        assert_eq!(normalize_rate(0.0, 37.0).unwrap(), 0.0);
        assert_eq!(normalize_rate(528.0, 10_000.0).unwrap(), 528.0);
        assert!(matches!(
            normalize_rate(1.0, 0.0),
            Err(PrevalenceError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn negative_rate_rejected() {
        let csv = "disease,subgroup,category,rate_per_10k,source,year\nasthma,white,race_ethnicity,-5,x,\n";
        assert!(matches!(
            PrevalenceTable::read_csv(csv.as_bytes()),
            Err(PrevalenceError::NegativeRate { line: 2, .. })
        ));
    }

    #[test]
    fn missing_rate_gives_partial_row() {
        let t = PrevalenceTable::from_rows([
            row("a", "white", Category::RaceEthnicity, Some(10.0)),
            row("a", "black", Category::RaceEthnicity, Some(20.0)),
            row("a", "pacific_islander", Category::RaceEthnicity, None),
            row("b", "white", Category::RaceEthnicity, Some(1.0)),
            row("b", "black", Category::RaceEthnicity, Some(0.0)),
            row("b", "pacific_islander", Category::RaceEthnicity, Some(3.0)),
        ])
        .unwrap();
        let ranks = rank_from_prevalence(&t, Category::RaceEthnicity);
        let a = ranks.row("a").unwrap();
        assert!(a.partial);
        assert_eq!(a.order(), ["black", "white"]);
        let b = ranks.row("b").unwrap();
        assert!(!b.partial);
        assert_eq!(b.order(), ["pacific_islander", "white", "black"]);
    }

    #[test]
    fn csv_round_trip() {
        let mut r = row("a", "male", Category::Gender, Some(528.0));
        r.year = Some(2019);
        let t =
            PrevalenceTable::from_rows([r, row("a", "female", Category::Gender, None)]).unwrap();
        let text = t.to_csv_string();
        assert_eq!(PrevalenceTable::read_csv(text.as_bytes()).unwrap(), t);
    }
}
