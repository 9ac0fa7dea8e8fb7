//! Reads scorer output in the versioned logits JSONL format, averages the
//! per-template scores and ranks subgroups.
//!
//! cargo run --example score_contract

use std::path::PathBuf;

use cooccur_audit::{load_logits, mean_logits, LogitTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let sample = load_logits(root.join("logits/harvester_sample.jsonl"))?;
    for m in mean_logits(&sample)? {
        println!(
            "{} {}/{}: mean {} = {:.4} over {} templates",
            m.model, m.disease, m.subgroup, m.scoring_mode, m.mean, m.n_templates
        );
    }

    // Python's json module writes bare NaN; such records are rejected.
    let line = r#"{"v": 1, "model": "m", "language": "en", "disease": "asthma", "subgroup": "male", "category": "gender", "template": 0, "score": NaN, "scoring_mode": "sum_logprob"}"#;
    match LogitTable::from_jsonl(line) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
