//! Multilingual prompt templates.
//!
//! Every template holds `{demographic}` and `{disease}` exactly once. Display
//! forms are inserted verbatim: no grammatical agreement is attempted for
//! languages with inflected adjectives (es, fr), and no spaces are added
//! around CJK text.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dictionary::{Category, Concept, DictionaryBundle};

pub const DEMOGRAPHIC_SLOT: &str = "{demographic}";
pub const DISEASE_SLOT: &str = "{disease}";

/// Stem variant appended by the `--in-america` option.
pub const IN_AMERICA_SUFFIX: &str = " in America";

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("cannot read templates {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed templates: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("template set for `{0}` is empty")]
    Empty(String),
    #[error("template #{index} must contain `{slot}` exactly once (found {found}): {template}")]
    Placeholder {
        index: usize,
        slot: &'static str,
        found: usize,
        template: String,
    },
    #[error("concept `{concept}` has no display form for language `{language}`")]
    MissingDisplay { concept: String, language: String },
    #[error("{0} is not a demographic category")]
    NotDemographic(Category),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTemplateSet", into = "RawTemplateSet")]
pub struct TemplateSet {
    language: String,
    templates: Vec<String>,
    suffix: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTemplateSet {
    language: String,
    templates: Vec<String>,
    suffix: Option<String>,
}

impl TryFrom<RawTemplateSet> for TemplateSet {
    type Error = TemplateError;

    fn try_from(raw: RawTemplateSet) -> Result<Self, Self::Error> {
        TemplateSet::new(raw.language, raw.templates, raw.suffix)
    }
}

impl From<TemplateSet> for RawTemplateSet {
    fn from(t: TemplateSet) -> Self {
        RawTemplateSet {
            language: t.language,
            templates: t.templates,
            suffix: t.suffix,
        }
    }
}

impl TemplateSet {
    pub fn new(
        language: impl Into<String>,
        templates: Vec<String>,
        suffix: Option<String>,
    ) -> Result<Self, TemplateError> {
        let language = language.into();
        if templates.is_empty() {
            return Err(TemplateError::Empty(language));
        }
        for (index, template) in templates.iter().enumerate() {
            for slot in [DEMOGRAPHIC_SLOT, DISEASE_SLOT] {
                let found = template.matches(slot).count();
                if found != 1 {
                    return Err(TemplateError::Placeholder {
                        index,
                        slot,
                        found,
                        template: template.clone(),
                    });
                }
            }
        }
        Ok(Self {
            language,
            templates,
            suffix,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TemplateError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| TemplateError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn templates(&self) -> &[String] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn suffix(&self) -> Option<&str> {
        self.suffix.as_deref()
    }

    pub fn with_suffix(mut self, suffix: Option<String>) -> Self {
        self.suffix = suffix;
        self
    }

    /// Fills template `index` with the given surface forms.
    pub fn fill(&self, index: usize, disease: &str, demographic: &str) -> String {
        let mut text = self.templates[index]
            .replace(DISEASE_SLOT, disease)
            .replace(DEMOGRAPHIC_SLOT, demographic);
        if let Some(suffix) = &self.suffix {
            text.push_str(suffix);
        }
        text.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    /// Regenerates a prompt's text from its metadata.
    pub fn regenerate(
        &self,
        prompt: &RenderedPrompt,
        bundle: &DictionaryBundle,
    ) -> Result<String, TemplateError> {
        let disease = bundle
            .find(Category::Disease, &prompt.disease)
            .ok_or_else(|| missing(&prompt.disease, &self.language))?;
        let subgroup = bundle
            .find(prompt.category, &prompt.subgroup)
            .ok_or_else(|| missing(&prompt.subgroup, &self.language))?;
        Ok(self.fill(
            prompt.template,
            display(disease, &self.language)?,
            display(subgroup, &self.language)?,
        ))
    }
}

fn missing(concept: &str, language: &str) -> TemplateError {
    TemplateError::MissingDisplay {
        concept: concept.to_string(),
        language: language.to_string(),
    }
}

fn display<'a>(concept: &'a Concept, language: &str) -> Result<&'a str, TemplateError> {
    concept
        .display_for(language)
        .ok_or_else(|| missing(&concept.id, language))
}

/// One prompt line; the JSONL form is what the external scorer consumes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedPrompt {
    pub disease: String,
    pub subgroup: String,
    pub category: Category,
    /// 0-based index into the template set.
    pub template: usize,
    pub language: String,
    pub text: String,
}

pub fn render(
    t: &TemplateSet,
    disease: &Concept,
    subgroup: &Concept,
) -> Result<Vec<RenderedPrompt>, TemplateError> {
    if !subgroup.category.is_demographic() {
        return Err(TemplateError::NotDemographic(subgroup.category));
    }
    let disease_form = display(disease, &t.language)?;
    let subgroup_form = display(subgroup, &t.language)?;
    Ok((0..t.len())
        .map(|template| RenderedPrompt {
            disease: disease.id.clone(),
            subgroup: subgroup.id.clone(),
            category: subgroup.category,
            template,
            language: t.language.clone(),
            text: t.fill(template, disease_form, subgroup_form),
        })
        .collect())
}

/// Every (disease, subgroup, template) prompt for one category, ordered by
/// disease id, subgroup id, then template index.
pub fn render_matrix(
    t: &TemplateSet,
    bundle: &DictionaryBundle,
    category: Category,
) -> Result<Vec<RenderedPrompt>, TemplateError> {
    if !category.is_demographic() {
        return Err(TemplateError::NotDemographic(category));
    }
    let mut diseases: Vec<&Concept> = bundle.diseases.iter().collect();
    diseases.sort_by(|a, b| a.id.cmp(&b.id));
    let mut subgroups: Vec<&Concept> = bundle.concepts(category).iter().collect();
    subgroups.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = Vec::with_capacity(diseases.len() * subgroups.len() * t.len());
    for disease in diseases {
        for subgroup in &subgroups {
            out.extend(render(t, disease, subgroup)?);
        }
    }
    Ok(out)
}

/// JSONL, one prompt per line, trailing newline.
pub fn prompts_to_jsonl(prompts: &[RenderedPrompt]) -> String {
    let mut out = String::new();
    for p in prompts {
        out.push_str(&serde_json::to_string(p).expect("prompt serializes"));
        out.push('\n');
    }
    out
}
