mod common;

use common::data;
use cooccur_audit::normalize_text;

#[test]
fn paragraph_matches_golden_tokens() {
    let text = std::fs::read_to_string(data("tokenize/paragraph.txt")).unwrap();
    let golden: Vec<String> = serde_json::from_str(
        &std::fs::read_to_string(data("tokenize/paragraph.tokens.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(normalize_text(&text).tokens, golden);
}

#[test]
fn punctuation_and_case() {
    let t = normalize_text("COVID-19, non-binary; Non‑Hispanic   white (U.S.)");
    assert_eq!(
        t.tokens,
        ["covid", "19", "non", "binary", "non", "hispanic", "white", "u", "s"]
    );
}
