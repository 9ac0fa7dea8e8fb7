//! Counts co-occurrences in a small gzip-compressed JSONL corpus.
//!
//! cargo run --example count_synthetic_corpus

use std::io::Write;
use std::path::PathBuf;

use cooccur_audit::scanner::corpus::CorpusLines;
use cooccur_audit::scanner::CountOptions;
use cooccur_audit::{
    compile_matcher, count_corpus, load_dictionary, Category, DedupMode, Scanner, WindowConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let bundle = load_dictionary(root.join("dictionaries/disease_demographics.json"))?;
    let matcher = compile_matcher(&bundle, "en")?;

    let docs = [
        "Asthma prevalence was highest among Black children and Puerto Rican adults.",
        "In a cohort of 2,000 women, type 2 diabetes was more common in Hispanic participants.",
        "Hypertension control among Asian American men improved after the intervention.",
        "No demographic terms here, only arthritis and gout.",
    ];
    let dir = tempfile::tempdir()?;
    let shard = dir.path().join("shard-000.jsonl.gz");
    let mut gz = flate2::write::GzEncoder::new(
        std::fs::File::create(&shard)?,
        flate2::Compression::default(),
    );
    for (i, text) in docs.iter().enumerate() {
        writeln!(
            gz,
            "{}",
            serde_json::json!({"text": text, "meta": {"id": i}})
        )?;
    }
    gz.finish()?;

    for mode in [DedupMode::MentionPairs, DedupMode::PerDocument] {
        let scanner = Scanner::new(&matcher, WindowConfig::new(vec![5, 10, 50], mode)?);
        let opts = CountOptions {
            parallelism: 2,
            ..CountOptions::default()
        };
        let outcome = count_corpus(CorpusLines::new([shard.clone()]), &scanner, &opts, None)?;
        let m = outcome.matrix;
        println!(
            "{mode:?}: {} docs, {} tokens",
            m.docs_scanned, m.tokens_scanned
        );
        for row in m.rows().filter(|r| r.count > 0 && r.window == 10) {
            println!(
                "  {:<14} {:<10} {:<15} W={:<3} {}",
                row.disease,
                row.subgroup,
                row.category.as_str(),
                row.window,
                row.count
            );
        }
        let asthma = m
            .disease_total("asthma", Category::RaceEthnicity, 50)
            .unwrap_or(0);
        println!("  asthma x race at W=50: {asthma}");
    }
    Ok(())
}
