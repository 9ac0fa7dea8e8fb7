//! Which subgroup sits at the top, bottom and second-to-bottom position per
//! disease, and how often two sources agree.
//!
//! cargo run --example position_tallies

use std::path::PathBuf;

use cooccur_audit::{
    load_logits, load_prevalence, mean_logits, position_tally, rank_from_logits,
    rank_from_prevalence, Category, Position, RankTable,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let means = mean_logits(&load_logits(root.join("logits/llama3_70b_gold15.jsonl"))?)?;
    let prevalence = load_prevalence(root.join("prevalence/nhis_cdc_15.csv"))?;

    for category in Category::DEMOGRAPHIC {
        let model = rank_from_logits(&means, "meta-llama/Meta-Llama-3-70B", "en", category)?;
        let real = rank_from_prevalence(&prevalence, category);
        let (model, real) = RankTable::restrict_to_shared(&model, &real);
        println!("== {category} ==");
        for position in Position::ALL {
            if position == Position::SecondBottom && category == Category::Gender {
                continue;
            }
            let t = position_tally(&model, &real, position)?;
            println!(
                "{:<14} model {:?}\n{:<14} real  {:?}\n{:<14} matches {} / {} (ambiguous: {:?})",
                position.as_str(),
                t.counts,
                "",
                t.reference_counts,
                "",
                t.match_count,
                model.rows.len(),
                t.ambiguous
            );
        }
    }
    Ok(())
}
