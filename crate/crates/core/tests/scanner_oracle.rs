mod common;

use std::io;

use common::*;
use cooccur_audit::scanner::CountOptions;
use cooccur_audit::{
    compile_matcher, count_corpus, scan_document, DedupMode, Scanner, TokenStream, WindowConfig,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const WINDOWS: [u32; 3] = [50, 100, 250];

fn lines(v: &[String]) -> impl Iterator<Item = io::Result<String>> + Send + '_ {
    v.iter().cloned().map(Ok)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scan_matches_naive_oracle(seed in any::<u64>(), small in 1u32..8) {
        let bundle = test_bundle();
        let matcher = compile_matcher(&bundle, "en").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tokens = random_tokens(&mut rng, &bundle, 300);
        let text = render_text(&mut rng, &tokens);
        let doc = TokenStream::new("p", &text);
        prop_assert_eq!(&doc.tokens, &tokens);
        let windows = vec![small, 50, 100, 250];
        for mode in [DedupMode::MentionPairs, DedupMode::PerDocument] {
            let cfg = WindowConfig::new(windows.clone(), mode).unwrap();
            let m = scan_document(&doc, &matcher, &cfg);
            let occ = naive_occurrences(&bundle, &tokens);
            let expected = pair_counts(&occ, &windows, mode == DedupMode::PerDocument);
            prop_assert_eq!(matrix_cells(&m), expected);
            prop_assert!(m.monotonicity_violations().is_empty());
        }
    }

    #[test]
    fn matcher_matches_naive_occurrences(seed in any::<u64>()) {
        let bundle = test_bundle();
        let matcher = compile_matcher(&bundle, "en").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tokens = random_tokens(&mut rng, &bundle, 200);
        let mut got: Vec<NaiveOccurrence> = matcher
            .find(&tokens)
            .into_iter()
            .map(|o| {
                let c = matcher.concept(o.concept);
                NaiveOccurrence { start: o.start, len: o.end - o.start + 1, id: c.id.clone(), category: c.category }
            })
            .collect();
        got.sort();
        let mut want = naive_occurrences(&bundle, &tokens);
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn per_document_never_exceeds_mention_pairs(seed in any::<u64>()) {
        let bundle = test_bundle();
        let matcher = compile_matcher(&bundle, "en").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let doc = TokenStream { tokens: random_tokens(&mut rng, &bundle, 400), source_doc_id: "d".into() };
        let pairs = scan_document(&doc, &matcher, &WindowConfig::new(WINDOWS.to_vec(), DedupMode::MentionPairs).unwrap());
        let once = scan_document(&doc, &matcher, &WindowConfig::new(WINDOWS.to_vec(), DedupMode::PerDocument).unwrap());
        for (a, b) in once.rows().zip(pairs.rows()) {
            prop_assert!(a.count <= b.count);
            prop_assert!(a.count <= 1);
        }
    }

    #[test]
    fn corpus_counts_are_order_independent(seed in any::<u64>()) {
        let bundle = test_bundle();
        let matcher = compile_matcher(&bundle, "en").unwrap();
        let scanner = Scanner::new(&matcher, WindowConfig::default());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let corpus = generate_corpus(&mut rng, &bundle, 40, 300, &WINDOWS);
        let mut shuffled = corpus.lines.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let opts = CountOptions { parallelism: 3, ..CountOptions::default() };
        let a = count_corpus(lines(&corpus.lines), &scanner, &opts, None).unwrap().matrix;
        let b = count_corpus(lines(&shuffled), &scanner, &opts, None).unwrap().matrix;
        prop_assert_eq!(a.to_csv_string(), b.to_csv_string());
        prop_assert_eq!(matrix_cells(&a), corpus.mention_pairs);
    }
}

#[test]
fn per_document_corpus_matches_ledger() {
    let bundle = test_bundle();
    let matcher = compile_matcher(&bundle, "en").unwrap();
    let scanner = Scanner::new(
        &matcher,
        WindowConfig::new(WINDOWS.to_vec(), DedupMode::PerDocument).unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let corpus = generate_corpus(&mut rng, &bundle, 500, 600, &WINDOWS);
    let opts = CountOptions {
        parallelism: 4,
        ..CountOptions::default()
    };
    let m = count_corpus(lines(&corpus.lines), &scanner, &opts, None)
        .unwrap()
        .matrix;
    assert_eq!(matrix_cells(&m), corpus.per_document);
    assert_eq!(m.docs_scanned, 500);
    assert_eq!(m.tokens_scanned, corpus.tokens);
}

#[test]
fn fixture_dictionary_scans_a_sentence() {
    let bundle =
        cooccur_audit::load_dictionary(data("dictionaries/disease_demographics.json")).unwrap();
    let matcher = compile_matcher(&bundle, "en").unwrap();
    let doc = TokenStream::new(
        "s",
        "Asthma rates were highest among Black women in the cohort.",
    );
    let m = scan_document(&doc, &matcher, &WindowConfig::default());
    assert_eq!(
        m.get(
            "asthma",
            "black",
            cooccur_audit::Category::RaceEthnicity,
            50
        ),
        Some(1)
    );
    assert_eq!(
        m.get("asthma", "female", cooccur_audit::Category::Gender, 50),
        Some(1)
    );
    assert_eq!(m.total(), 6);
}

#[test]
fn strict_mode_reports_first_bad_document() {
    let bundle = test_bundle();
    let matcher = compile_matcher(&bundle, "en").unwrap();
    let scanner = Scanner::new(&matcher, WindowConfig::default());
    let docs: Vec<String> = vec![
        r#"{"text": "asthma in men"}"#.into(),
        "{broken".into(),
        r#"{"text": "gout"}"#.into(),
        "also broken".into(),
    ];
    for parallelism in [1, 4] {
        let opts = CountOptions {
            parallelism,
            ..CountOptions::default()
        };
        let err = count_corpus(lines(&docs), &scanner, &opts, None).unwrap_err();
        assert!(
            matches!(
                err,
                cooccur_audit::scanner::ScanError::Format { ordinal: 1, .. }
            ),
            "{err}"
        );
        let opts = CountOptions {
            parallelism,
            lenient: true,
            ..CountOptions::default()
        };
        let out = count_corpus(lines(&docs), &scanner, &opts, None).unwrap();
        assert_eq!(
            out.skipped.iter().map(|s| s.ordinal).collect::<Vec<_>>(),
            [1, 3]
        );
        assert_eq!(out.matrix.total(), 3);
    }
}
