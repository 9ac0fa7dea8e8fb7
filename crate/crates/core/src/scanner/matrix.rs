use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ScanError;
use crate::dictionary::{Category, CompiledMatcher};

/// Axes of a dense co-occurrence matrix. All axes are sorted, so iterating
/// the dense buffer yields rows in lexicographic (disease, subgroup,
/// category, window) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixLayout {
    diseases: Vec<String>,
    subgroups: Vec<(String, Category)>,
    windows: Vec<u32>,
}

impl MatrixLayout {
    pub fn new(
        diseases: impl IntoIterator<Item = String>,
        subgroups: impl IntoIterator<Item = (String, Category)>,
        windows: impl IntoIterator<Item = u32>,
    ) -> Self {
        let diseases: BTreeSet<String> = diseases.into_iter().collect();
        let subgroups: BTreeSet<(String, Category)> = subgroups.into_iter().collect();
        let windows: BTreeSet<u32> = windows.into_iter().collect();
        Self {
            diseases: diseases.into_iter().collect(),
            subgroups: subgroups.into_iter().collect(),
            windows: windows.into_iter().collect(),
        }
    }

    pub fn from_matcher(matcher: &CompiledMatcher, windows: &[u32]) -> Self {
        let concepts = matcher.concepts();
        Self::new(
            concepts
                .iter()
                .filter(|c| c.category == Category::Disease)
                .map(|c| c.id.clone()),
            concepts
                .iter()
                .filter(|c| c.category.is_demographic())
                .map(|c| (c.id.clone(), c.category)),
            windows.iter().copied(),
        )
    }

    pub fn diseases(&self) -> &[String] {
        &self.diseases
    }

    pub fn subgroups(&self) -> &[(String, Category)] {
        &self.subgroups
    }

    pub fn windows(&self) -> &[u32] {
        &self.windows
    }

    pub fn cells(&self) -> usize {
        self.diseases.len() * self.subgroups.len() * self.windows.len()
    }

    pub(crate) fn disease_index(&self, id: &str) -> Option<usize> {
        self.diseases.binary_search_by(|d| d.as_str().cmp(id)).ok()
    }

    pub(crate) fn subgroup_index(&self, id: &str, category: Category) -> Option<usize> {
        self.subgroups
            .binary_search_by(|(s, c)| (s.as_str(), *c).cmp(&(id, category)))
            .ok()
    }

    pub(crate) fn window_index(&self, window: u32) -> Option<usize> {
        self.windows.binary_search(&window).ok()
    }

    #[inline]
    pub(crate) fn offset(&self, disease: usize, subgroup: usize, window: usize) -> usize {
        (disease * self.subgroups.len() + subgroup) * self.windows.len() + window
    }
}

/// One `disease,subgroup,category,window,count` record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub disease: String,
    pub subgroup: String,
    pub category: Category,
    pub window: u32,
    pub count: u64,
}

/// Co-occurrence counts indexed by (disease, subgroup, window). Every cell of
/// the layout is present; absent pairs count zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoOccurrenceMatrix {
    layout: Arc<MatrixLayout>,
    counts: Vec<u64>,
    pub docs_scanned: u64,
    pub tokens_scanned: u64,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    docs_scanned: u64,
    tokens_scanned: u64,
    windows: Vec<u32>,
    counts: Vec<CountRow>,
}

impl CoOccurrenceMatrix {
    pub fn zeros(layout: Arc<MatrixLayout>) -> Self {
        let cells = layout.cells();
        Self {
            layout,
            counts: vec![0; cells],
            docs_scanned: 0,
            tokens_scanned: 0,
        }
    }

    pub fn layout(&self) -> &Arc<MatrixLayout> {
        &self.layout
    }

    pub fn get(
        &self,
        disease: &str,
        subgroup: &str,
        category: Category,
        window: u32,
    ) -> Option<u64> {
        let d = self.layout.disease_index(disease)?;
        let s = self.layout.subgroup_index(subgroup, category)?;
        let w = self.layout.window_index(window)?;
        Some(self.counts[self.layout.offset(d, s, w)])
    }

    pub fn set(
        &mut self,
        disease: &str,
        subgroup: &str,
        category: Category,
        window: u32,
        count: u64,
    ) -> Option<()> {
        let d = self.layout.disease_index(disease)?;
        let s = self.layout.subgroup_index(subgroup, category)?;
        let w = self.layout.window_index(window)?;
        let off = self.layout.offset(d, s, w);
        self.counts[off] = count;
        Some(())
    }

    #[inline]
    pub(crate) fn add_at(&mut self, offset: usize, n: u64) {
        self.counts[offset] += n;
    }

    /// Elementwise sum. Both matrices must share a layout.
    pub fn merge(&mut self, other: &CoOccurrenceMatrix) -> Result<(), ScanError> {
        if self.layout != other.layout {
            return Err(ScanError::LayoutMismatch);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.docs_scanned += other.docs_scanned;
        self.tokens_scanned += other.tokens_scanned;
        Ok(())
    }

    pub fn merged(mut self, other: &CoOccurrenceMatrix) -> Result<Self, ScanError> {
        self.merge(other)?;
        Ok(self)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum over every subgroup of `category` for one disease at `window`.
    pub fn disease_total(&self, disease: &str, category: Category, window: u32) -> Option<u64> {
        let d = self.layout.disease_index(disease)?;
        let w = self.layout.window_index(window)?;
        Some(
            self.layout
                .subgroups
                .iter()
                .enumerate()
                .filter(|(_, (_, c))| *c == category)
                .map(|(s, _)| self.counts[self.layout.offset(d, s, w)])
                .sum(),
        )
    }

    pub fn rows(&self) -> impl Iterator<Item = CountRow> + '_ {
        let l = &self.layout;
        l.diseases.iter().enumerate().flat_map(move |(d, disease)| {
            l.subgroups
                .iter()
                .enumerate()
                .flat_map(move |(s, (subgroup, category))| {
                    l.windows
                        .iter()
                        .enumerate()
                        .map(move |(w, window)| CountRow {
                            disease: disease.clone(),
                            subgroup: subgroup.clone(),
                            category: *category,
                            window: *window,
                            count: self.counts[l.offset(d, s, w)],
                        })
                })
        })
    }

    /// (disease, subgroup, category, smaller window, larger window) cells where
    /// the smaller window holds more pairs than the larger one.
    pub fn monotonicity_violations(&self) -> Vec<(String, String, Category, u32, u32)> {
        let l = &self.layout;
        let mut out = Vec::new();
        for (d, disease) in l.diseases.iter().enumerate() {
            for (s, (subgroup, category)) in l.subgroups.iter().enumerate() {
                for w in 1..l.windows.len() {
                    if self.counts[l.offset(d, s, w - 1)] > self.counts[l.offset(d, s, w)] {
                        out.push((
                            disease.clone(),
                            subgroup.clone(),
                            *category,
                            l.windows[w - 1],
                            l.windows[w],
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ScanError> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8 csv")
    }

    pub fn to_json_string(&self) -> String {
        let doc = MatrixJson {
            docs_scanned: self.docs_scanned,
            tokens_scanned: self.tokens_scanned,
            windows: self.layout.windows.clone(),
            counts: self.rows().collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("matrix serializes");
        s.push('\n');
        s
    }

    fn from_rows(rows: Vec<CountRow>, windows: Option<Vec<u32>>) -> Result<Self, ScanError> {
        let layout = MatrixLayout::new(
            rows.iter().map(|r| r.disease.clone()),
            rows.iter().map(|r| (r.subgroup.clone(), r.category)),
            rows.iter()
                .map(|r| r.window)
                .chain(windows.into_iter().flatten()),
        );
        let mut m = Self::zeros(Arc::new(layout));
        let mut seen = vec![false; m.counts.len()];
        for row in rows {
            if !row.category.is_demographic() {
                return Err(ScanError::Format {
                    ordinal: 0,
                    message: format!("count row for {} has non-demographic category", row.disease),
                });
            }
            let l = &m.layout;
            let off = l.offset(
                l.disease_index(&row.disease).expect("row in layout"),
                l.subgroup_index(&row.subgroup, row.category)
                    .expect("row in layout"),
                l.window_index(row.window).expect("row in layout"),
            );
            if std::mem::replace(&mut seen[off], true) {
                return Err(ScanError::Format {
                    ordinal: 0,
                    message: format!(
                        "duplicate count row {}/{}/{}",
                        row.disease, row.subgroup, row.window
                    ),
                });
            }
            m.counts[off] = row.count;
        }
        Ok(m)
    }

    /// Reads the CSV form. Document and token totals are not part of the CSV
    /// and read back as zero.
    pub fn read_csv<R: Read>(input: R) -> Result<Self, ScanError> {
        let mut r = csv::Reader::from_reader(input);
        let rows = r.deserialize().collect::<Result<Vec<CountRow>, _>>()?;
        Self::from_rows(rows, None)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ScanError> {
        let doc: MatrixJson = serde_json::from_str(text).map_err(|e| ScanError::Format {
            ordinal: 0,
            message: e.to_string(),
        })?;
        let mut m = Self::from_rows(doc.counts, Some(doc.windows))?;
        m.docs_scanned = doc.docs_scanned;
        m.tokens_scanned = doc.tokens_scanned;
        Ok(m)
    }
}
