/// Normalized tokens of one document, in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub source_doc_id: String,
}

impl TokenStream {
    pub fn new(source_doc_id: impl Into<String>, raw: &str) -> Self {
        Self {
            tokens: tokenize(raw),
            source_doc_id: source_doc_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Lowercases `raw` and splits it into maximal runs of alphanumeric
/// characters. Whitespace and punctuation separate tokens and are dropped.
pub fn normalize_text(raw: &str) -> TokenStream {
    TokenStream::new("", raw)
}

pub(crate) fn tokenize(raw: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in raw.chars() {
        if ch.is_alphanumeric() {
            current.extend(ch.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Canonical form of a dictionary phrase: its tokens joined by single spaces.
pub fn normalize_phrase(phrase: &str) -> String {
    tokenize(phrase).join(" ")
}
