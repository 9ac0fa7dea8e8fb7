//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use cooccur_audit::{Category, DictionaryBundle};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn data(rel: &str) -> PathBuf {
    data_dir().join(rel)
}

/// No synonym contains another concept's phrase as an inner or trailing
/// span, so each planted phrase yields exactly one mention.
pub const TEST_DICTIONARY: &str = r#"{
  "version": "test",
  "diseases": [
    {"id": "asthma", "display": {"en": "asthma"}, "synonyms": {"en": ["asthma"]}},
    {"id": "copd", "display": {"en": "COPD"}, "synonyms": {"en": ["chronic obstructive pulmonary disease", "copd"]}},
    {"id": "diabetes", "display": {"en": "diabetes"}, "synonyms": {"en": ["diabetes", "diabetes mellitus"]}},
    {"id": "heart_failure", "display": {"en": "heart failure"}, "synonyms": {"en": ["heart failure", "cardiac failure"]}},
    {"id": "gout", "display": {"en": "gout"}, "synonyms": {"en": ["gout"]}}
  ],
  "race": [
    {"id": "black", "display": {"en": "Black"}, "synonyms": {"en": ["black", "african american"]}},
    {"id": "white", "display": {"en": "White"}, "synonyms": {"en": ["white", "caucasian"]}},
    {"id": "asian", "display": {"en": "Asian"}, "synonyms": {"en": ["asian"]}},
    {"id": "hispanic", "display": {"en": "Hispanic"}, "synonyms": {"en": ["hispanic", "latino"]}}
  ],
  "gender": [
    {"id": "male", "display": {"en": "male"}, "synonyms": {"en": ["male", "men", "man"]}},
    {"id": "female", "display": {"en": "female"}, "synonyms": {"en": ["female", "women", "woman"]}}
  ]
}"#;

pub fn test_bundle() -> DictionaryBundle {
    DictionaryBundle::from_json(TEST_DICTIONARY).expect("test dictionary is valid")
}

pub const FILLER: &[&str] = &[
    "the", "of", "patients", "reported", "study", "in", "a", "cohort", "with", "risk", "was",
    "higher", "among", "and", "care", "clinic", "2019", "x7", "café", "naïve", "數據", "über",
];

/// Phrase tokens (besides filler) that random documents may contain, to
/// produce partial and overlapping matches.
pub const NOISE: &[&str] = &[
    "heart",
    "failure",
    "african",
    "american",
    "diabetes",
    "mellitus",
    "chronic",
    "pulmonary",
    "disease",
    "obstructive",
    "men",
    "black",
    "white",
    "asthma",
];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaiveOccurrence {
    pub start: usize,
    pub len: usize,
    pub id: String,
    pub category: Category,
}

/// Longest phrase per (start, category) by direct comparison against every
/// synonym of every concept.
pub fn naive_occurrences(bundle: &DictionaryBundle, tokens: &[String]) -> Vec<NaiveOccurrence> {
    let mut out = Vec::new();
    for start in 0..tokens.len() {
        for category in [Category::Disease, Category::RaceEthnicity, Category::Gender] {
            let mut best: Option<(usize, &str)> = None;
            for c in bundle.concepts(category) {
                for phrase in &c.synonyms["en"] {
                    let parts: Vec<&str> = phrase.split(' ').collect();
                    let end = start + parts.len();
                    if end <= tokens.len()
                        && tokens[start..end].iter().zip(&parts).all(|(a, b)| a == b)
                        && best.is_none_or(|(len, _)| parts.len() > len)
                    {
                        best = Some((parts.len(), &c.id));
                    }
                }
            }
            if let Some((len, id)) = best {
                out.push(NaiveOccurrence {
                    start,
                    len,
                    id: id.to_string(),
                    category,
                });
            }
        }
    }
    out
}

pub type CellKey = (String, String, Category, u32);

/// Every (disease mention, demographic mention) pair, counted once per window
/// whose size reaches their start distance.
pub fn pair_counts(
    occ: &[NaiveOccurrence],
    windows: &[u32],
    per_document: bool,
) -> BTreeMap<CellKey, u64> {
    let mut out: BTreeMap<CellKey, u64> = BTreeMap::new();
    let mut seen: BTreeSet<CellKey> = BTreeSet::new();
    for d in occ.iter().filter(|o| o.category == Category::Disease) {
        for s in occ.iter().filter(|o| o.category != Category::Disease) {
            let dist = d.start.abs_diff(s.start) as u64;
            for &w in windows {
                if dist <= w as u64 {
                    let key = (d.id.clone(), s.id.clone(), s.category, w);
                    if per_document {
                        seen.insert(key);
                    } else {
                        *out.entry(key).or_default() += 1;
                    }
                }
            }
        }
    }
    for key in seen {
        *out.entry(key).or_default() += 1;
    }
    out
}

pub fn add_counts(into: &mut BTreeMap<CellKey, u64>, from: BTreeMap<CellKey, u64>) {
    for (k, v) in from {
        *into.entry(k).or_default() += v;
    }
}

/// Nonzero cells of a matrix.
pub fn matrix_cells(m: &cooccur_audit::CoOccurrenceMatrix) -> BTreeMap<CellKey, u64> {
    m.rows()
        .filter(|r| r.count > 0)
        .map(|r| ((r.disease, r.subgroup, r.category, r.window), r.count))
        .collect()
}

fn styled<R: Rng>(rng: &mut R, word: &str) -> String {
    match rng.gen_range(0..4) {
        0 => word.to_uppercase(),
        1 => {
            let mut c = word.chars();
            c.next().map_or_else(String::new, |f| {
                f.to_uppercase().collect::<String>() + c.as_str()
            })
        }
        _ => word.to_string(),
    }
}

const SEPARATORS: &[&str] = &[" ", "  ", ", ", ". ", "\n", " - ", "; ", " (", ") "];

/// Joins tokens with random punctuation and case, so tokenization must
/// recover exactly `tokens`.
pub fn render_text<R: Rng>(rng: &mut R, tokens: &[String]) -> String {
    let mut text = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            text.push_str(SEPARATORS.choose(rng).unwrap());
        }
        text.push_str(&styled(rng, t));
    }
    text
}

/// A random token sequence mixing filler, stray phrase parts and whole
/// phrases, for the direct scan oracle.
pub fn random_tokens<R: Rng>(
    rng: &mut R,
    bundle: &DictionaryBundle,
    max_len: usize,
) -> Vec<String> {
    let phrases: Vec<&String> = bundle
        .all_concepts()
        .flat_map(|c| &c.synonyms["en"])
        .collect();
    let target = rng.gen_range(0..=max_len);
    let mut tokens = Vec::with_capacity(target + 4);
    while tokens.len() < target {
        match rng.gen_range(0..10) {
            0..=1 => {
                for part in phrases.choose(rng).unwrap().split(' ') {
                    tokens.push(part.to_string());
                }
            }
            2 => tokens.push(NOISE.choose(rng).unwrap().to_string()),
            _ => tokens.push(FILLER.choose(rng).unwrap().to_string()),
        }
    }
    tokens.truncate(max_len);
    tokens
}

#[derive(Debug, Clone)]
pub struct GeneratedCorpus {
    pub lines: Vec<String>,
    /// Expected counts under mention-pair counting.
    pub mention_pairs: BTreeMap<CellKey, u64>,
    /// Expected counts under per-document counting.
    pub per_document: BTreeMap<CellKey, u64>,
    pub tokens: u64,
}

/// Documents built from filler runs and planted phrases. The ledger is kept
/// from the planted positions, never from scanning.
pub fn generate_corpus<R: Rng>(
    rng: &mut R,
    bundle: &DictionaryBundle,
    docs: usize,
    max_tokens: usize,
    windows: &[u32],
) -> GeneratedCorpus {
    let concepts: Vec<_> = bundle.all_concepts().collect();
    let mut out = GeneratedCorpus {
        lines: Vec::with_capacity(docs),
        mention_pairs: BTreeMap::new(),
        per_document: BTreeMap::new(),
        tokens: 0,
    };
    for doc in 0..docs {
        let target = rng.gen_range(0..=max_tokens);
        let mut tokens: Vec<String> = Vec::new();
        let mut planted = Vec::new();
        loop {
            let filler = rng.gen_range(0..40);
            if tokens.len() + filler > target {
                break;
            }
            tokens.extend((0..filler).map(|_| FILLER.choose(rng).unwrap().to_string()));
            let c = concepts.choose(rng).unwrap();
            let phrase = c.synonyms["en"].choose(rng).unwrap();
            let parts: Vec<&str> = phrase.split(' ').collect();
            if tokens.len() + parts.len() > target {
                break;
            }
            planted.push(NaiveOccurrence {
                start: tokens.len(),
                len: parts.len(),
                id: c.id.clone(),
                category: c.category,
            });
            tokens.extend(parts.iter().map(|p| p.to_string()));
        }
        out.tokens += tokens.len() as u64;
        add_counts(
            &mut out.mention_pairs,
            pair_counts(&planted, windows, false),
        );
        add_counts(&mut out.per_document, pair_counts(&planted, windows, true));
        let text = render_text(rng, &tokens);
        out.lines
            .push(serde_json::json!({"text": text, "meta": {"id": doc}}).to_string());
    }
    out
}

/// Kendall tau-a from counts of concordant and discordant ordered pairs.
pub fn tau_oracle(x: &[u32], y: &[u32]) -> f64 {
    let n = x.len() as i64;
    let (mut concordant, mut discordant) = (0i64, 0i64);
    for i in 0..x.len() {
        for j in 0..x.len() {
            if i == j {
                continue;
            }
            let a = (x[i] < x[j], x[i] > x[j]);
            let b = (y[i] < y[j], y[i] > y[j]);
            if (a.0 && b.0) || (a.1 && b.1) {
                concordant += 1;
            } else if (a.0 && b.1) || (a.1 && b.0) {
                discordant += 1;
            }
        }
    }
    (concordant - discordant) as f64 / (n * (n - 1)) as f64
}

/// Exact arithmetic mean of finite floats, rounded once.
pub fn exact_mean(values: &[f64]) -> f64 {
    let mut sum = BigRational::zero();
    for &v in values {
        sum += BigRational::from_float(v).expect("finite");
    }
    (sum / BigRational::from_integer(BigInt::from(values.len())))
        .to_f64()
        .expect("representable")
}

/// Random ranks 1..=n with ties (values drawn from a small range, then
/// mapped to min-ranks).
pub fn random_ranks<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    let scores: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32 + 1)).collect();
    scores
        .iter()
        .map(|s| 1 + scores.iter().filter(|t| *t > s).count() as u32)
        .collect()
}
