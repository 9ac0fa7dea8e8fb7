//! Keyword dictionaries and the compiled phrase matcher.
//!
//! A dictionary file is JSON with the top-level keys `version`, `diseases`,
//! `race` and `gender`. Each concept carries an `id`, per-language `display`
//! forms (used when rendering templates) and per-language `synonyms` (used
//! when scanning text). Synonyms are normalized with the scanner's tokenizer
//! at load time, so matching and window distances share one tokenization.
//!
//! Matching is on whole tokens only: `"white"` never matches inside
//! `"whiteboard"`. Surface forms are matched without word-sense
//! disambiguation, so phrases such as "white blood cells" produce a race
//! mention. That false-positive class is known and accepted.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scanner::tokenize::{normalize_phrase, tokenize};

/// Language every concept must carry synonyms for.
pub const CORPUS_LANGUAGE: &str = "en";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Disease,
    RaceEthnicity,
    Gender,
}

impl Category {
    pub const DEMOGRAPHIC: [Category; 2] = [Category::RaceEthnicity, Category::Gender];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Disease => "disease",
            Category::RaceEthnicity => "race_ethnicity",
            Category::Gender => "gender",
        }
    }

    pub fn is_demographic(self) -> bool {
        self != Category::Disease
    }

    fn slot(self) -> usize {
        match self {
            Category::Disease => 0,
            Category::RaceEthnicity => 1,
            Category::Gender => 2,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "disease" | "diseases" => Ok(Category::Disease),
            "race" | "race_ethnicity" | "race-ethnicity" | "ethnicity" => {
                Ok(Category::RaceEthnicity)
            }
            "gender" => Ok(Category::Gender),
            other => Err(format!("unknown category `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub id: String,
    pub category: Category,
    pub display: BTreeMap<String, String>,
    /// Normalized phrases per language.
    pub synonyms: BTreeMap<String, Vec<String>>,
}

impl Concept {
    pub fn display_for(&self, language: &str) -> Option<&str> {
        self.display.get(language).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryBundle {
    pub version: String,
    pub diseases: Vec<Concept>,
    pub race: Vec<Concept>,
    pub gender: Vec<Concept>,
}

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("cannot read dictionary {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed dictionary: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid dictionary:\n{}", join_issues(.0))]
    Validation(Vec<ValidationIssue>),
    #[error("concept `{concept}` has no synonyms for language `{language}`")]
    MissingLanguage { concept: String, language: String },
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    EmptyId {
        category: Category,
        position: usize,
    },
    DuplicateId {
        category: Category,
        id: String,
    },
    EmptySynonymList {
        concept: String,
        language: String,
    },
    EmptyPhrase {
        concept: String,
        language: String,
    },
    DuplicatePhrase {
        category: Category,
        language: String,
        phrase: String,
        concepts: Vec<String>,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::EmptyId { category, position } => {
                write!(f, "{category} concept #{position} has an empty id")
            }
            ValidationIssue::DuplicateId { category, id } => {
                write!(f, "duplicate {category} id `{id}`")
            }
            ValidationIssue::EmptySynonymList { concept, language } => {
                write!(
                    f,
                    "concept `{concept}` has an empty synonym list for `{language}`"
                )
            }
            ValidationIssue::EmptyPhrase { concept, language } => {
                write!(f, "concept `{concept}` has an empty `{language}` phrase")
            }
            ValidationIssue::DuplicatePhrase {
                category,
                language,
                phrase,
                concepts,
            } => write!(
                f,
                "{category} phrase `{phrase}` ({language}) is claimed by {}",
                concepts.join(", ")
            ),
        }
    }
}

/// A phrase shared by concepts of different categories. Allowed, but worth
/// reporting since both mentions are counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCategoryCollision {
    pub language: String,
    pub phrase: String,
    pub concepts: Vec<(Category, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConcept {
    id: String,
    display: BTreeMap<String, String>,
    synonyms: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    version: String,
    diseases: Vec<RawConcept>,
    race: Vec<RawConcept>,
    gender: Vec<RawConcept>,
}

pub fn load_dictionary(path: impl AsRef<Path>) -> Result<DictionaryBundle, DictionaryError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DictionaryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    DictionaryBundle::from_json(&text)
}

pub fn save_dictionary(
    bundle: &DictionaryBundle,
    path: impl AsRef<Path>,
) -> Result<(), DictionaryError> {
    let path = path.as_ref();
    fs::write(path, bundle.to_json()).map_err(|source| DictionaryError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl DictionaryBundle {
    pub fn from_json(text: &str) -> Result<Self, DictionaryError> {
        let raw: RawBundle = serde_json::from_str(text)?;
        let convert = |items: Vec<RawConcept>, category| {
            items
                .into_iter()
                .map(|c| Concept {
                    id: c.id,
                    category,
                    display: c.display,
                    synonyms: c
                        .synonyms
                        .into_iter()
                        .map(|(lang, phrases)| (lang, dedup_normalized(&phrases)))
                        .collect(),
                })
                .collect()
        };
        let bundle = DictionaryBundle {
            version: raw.version,
            diseases: convert(raw.diseases, Category::Disease),
            race: convert(raw.race, Category::RaceEthnicity),
            gender: convert(raw.gender, Category::Gender),
        };
        let issues = bundle.validate();
        if issues.is_empty() {
            Ok(bundle)
        } else {
            Err(DictionaryError::Validation(issues))
        }
    }

    pub fn to_json(&self) -> String {
        let to_raw = |items: &[Concept]| {
            items
                .iter()
                .map(|c| RawConcept {
                    id: c.id.clone(),
                    display: c.display.clone(),
                    synonyms: c.synonyms.clone(),
                })
                .collect()
        };
        let raw = RawBundle {
            version: self.version.clone(),
            diseases: to_raw(&self.diseases),
            race: to_raw(&self.race),
            gender: to_raw(&self.gender),
        };
        let mut out = serde_json::to_string_pretty(&raw).expect("dictionary serializes");
        out.push('\n');
        out
    }

    pub fn concepts(&self, category: Category) -> &[Concept] {
        match category {
            Category::Disease => &self.diseases,
            Category::RaceEthnicity => &self.race,
            Category::Gender => &self.gender,
        }
    }

    pub fn all_concepts(&self) -> impl Iterator<Item = &Concept> {
        self.diseases.iter().chain(&self.race).chain(&self.gender)
    }

    pub fn find(&self, category: Category, id: &str) -> Option<&Concept> {
        self.concepts(category).iter().find(|c| c.id == id)
    }

    /// Checks every bundle invariant and returns all violations found.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        for category in [Category::Disease, Category::RaceEthnicity, Category::Gender] {
            let concepts = self.concepts(category);
            let mut seen_ids: BTreeMap<&str, usize> = BTreeMap::new();
            // (language, phrase) -> concept ids
            let mut phrases: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
            for (position, concept) in concepts.iter().enumerate() {
                if concept.id.trim().is_empty() {
                    issues.push(ValidationIssue::EmptyId { category, position });
                } else {
                    let n = seen_ids.entry(&concept.id).or_default();
                    *n += 1;
                    if *n == 2 {
                        issues.push(ValidationIssue::DuplicateId {
                            category,
                            id: concept.id.clone(),
                        });
                    }
                }
                if !concept.synonyms.contains_key(CORPUS_LANGUAGE) {
                    issues.push(ValidationIssue::EmptySynonymList {
                        concept: concept.id.clone(),
                        language: CORPUS_LANGUAGE.to_string(),
                    });
                }
                for (language, list) in &concept.synonyms {
                    if list.is_empty() {
                        issues.push(ValidationIssue::EmptySynonymList {
                            concept: concept.id.clone(),
                            language: language.clone(),
                        });
                    }
                    for phrase in list {
                        if phrase.is_empty() {
                            issues.push(ValidationIssue::EmptyPhrase {
                                concept: concept.id.clone(),
                                language: language.clone(),
                            });
                            continue;
                        }
                        let owners = phrases.entry((language, phrase)).or_default();
                        if !owners.contains(&concept.id) {
                            owners.push(concept.id.clone());
                        }
                    }
                }
            }
            for ((language, phrase), concepts) in phrases {
                if concepts.len() > 1 {
                    issues.push(ValidationIssue::DuplicatePhrase {
                        category,
                        language: language.to_string(),
                        phrase: phrase.to_string(),
                        concepts,
                    });
                }
            }
        }
        issues
    }

    pub fn cross_category_collisions(&self) -> Vec<CrossCategoryCollision> {
        let mut owners: BTreeMap<(&str, &str), Vec<(Category, String)>> = BTreeMap::new();
        for concept in self.all_concepts() {
            for (language, list) in &concept.synonyms {
                for phrase in list {
                    owners
                        .entry((language, phrase))
                        .or_default()
                        .push((concept.category, concept.id.clone()));
                }
            }
        }
        owners
            .into_iter()
            .filter(|(_, o)| o.iter().any(|(c, _)| *c != o[0].0))
            .map(|((language, phrase), concepts)| CrossCategoryCollision {
                language: language.to_string(),
                phrase: phrase.to_string(),
                concepts,
            })
            .collect()
    }
}

fn dedup_normalized(phrases: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(phrases.len());
    for phrase in phrases {
        let normalized = normalize_phrase(phrase);
        if normalized.is_empty() || !out.contains(&normalized) {
            out.push(normalized);
        }
    }
    out
}

/// Index of a concept inside a [`CompiledMatcher`].
pub type ConceptIdx = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptRef {
    pub id: String,
    pub category: Category,
}

/// One phrase hit. `start` and `end` are inclusive token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occurrence {
    pub start: usize,
    pub end: usize,
    pub concept: ConceptIdx,
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    children: HashMap<u32, u32>,
    /// Concept ending here, per category slot.
    terminal: [Option<ConceptIdx>; 3],
}

/// Token-trie over every synonym of one language.
///
/// At each start index the longest phrase of each category wins; matches of
/// different concepts that overlap (different start, or different category)
/// are all reported. Immutable once built.
#[derive(Debug, Clone)]
pub struct CompiledMatcher {
    language: String,
    concepts: Vec<ConceptRef>,
    vocab: HashMap<String, u32>,
    nodes: Vec<TrieNode>,
    max_phrase_len: usize,
}

pub fn compile_matcher(
    bundle: &DictionaryBundle,
    language: &str,
) -> Result<CompiledMatcher, DictionaryError> {
    let mut matcher = CompiledMatcher {
        language: language.to_string(),
        concepts: Vec::new(),
        vocab: HashMap::new(),
        nodes: vec![TrieNode::default()],
        max_phrase_len: 0,
    };
    for concept in bundle.all_concepts() {
        let phrases = concept
            .synonyms
            .get(language)
            .filter(|p| !p.is_empty())
            .ok_or_else(|| DictionaryError::MissingLanguage {
                concept: concept.id.clone(),
                language: language.to_string(),
            })?;
        let idx = matcher.concepts.len() as ConceptIdx;
        matcher.concepts.push(ConceptRef {
            id: concept.id.clone(),
            category: concept.category,
        });
        for phrase in phrases {
            matcher.insert(phrase, idx, concept.category);
        }
    }
    Ok(matcher)
}

impl CompiledMatcher {
    fn insert(&mut self, phrase: &str, concept: ConceptIdx, category: Category) {
        let tokens = tokenize(phrase);
        if tokens.is_empty() {
            return;
        }
        self.max_phrase_len = self.max_phrase_len.max(tokens.len());
        let mut node = 0usize;
        for token in tokens {
            let next_id = self.vocab.len() as u32;
            let tid = *self.vocab.entry(token).or_insert(next_id);
            node = match self.nodes[node].children.get(&tid) {
                Some(&child) => child as usize,
                None => {
                    let child = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[node].children.insert(tid, child as u32);
                    child
                }
            };
        }
        // validation guarantees one owner per (category, phrase)
        self.nodes[node].terminal[category.slot()].get_or_insert(concept);
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn concepts(&self) -> &[ConceptRef] {
        &self.concepts
    }

    pub fn concept(&self, idx: ConceptIdx) -> &ConceptRef {
        &self.concepts[idx as usize]
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    /// All occurrences in `tokens`, ordered by start, category, end.
    pub fn find<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<Occurrence> {
        let ids: Vec<Option<u32>> = tokens
            .iter()
            .map(|t| self.vocab.get(t.as_ref()).copied())
            .collect();
        let mut out = Vec::new();
        for start in 0..ids.len() {
            let mut best: [Option<(usize, ConceptIdx)>; 3] = [None; 3];
            let mut node = 0usize;
            for (offset, id) in ids[start..].iter().enumerate() {
                let Some(id) = id else { break };
                let Some(&child) = self.nodes[node].children.get(id) else {
                    break;
                };
                node = child as usize;
                for (slot, term) in self.nodes[node].terminal.iter().enumerate() {
                    if let Some(concept) = term {
                        best[slot] = Some((start + offset, *concept));
                    }
                }
            }
            for (end, concept) in best.into_iter().flatten() {
                out.push(Occurrence {
                    start,
                    end,
                    concept,
                });
            }
        }
        out
    }
}
