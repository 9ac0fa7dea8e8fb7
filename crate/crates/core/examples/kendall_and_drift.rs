//! Kendall tau between corpus-count and prevalence rankings, and drift of a
//! perturbed model relative to its base.
//!
//! cargo run --example kendall_and_drift

use std::fs::File;
use std::path::PathBuf;

use cooccur_audit::stats::{compare_tables, mean_tau};
use cooccur_audit::{
    drift, load_logits, load_prevalence, mean_logits, rank_from_counts, rank_from_logits,
    rank_from_prevalence, Category, CoOccurrenceMatrix, RankRow, RankTable,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let counts = CoOccurrenceMatrix::read_csv(File::open(root.join("counts/pile_w250.csv"))?)?;
    let prevalence = load_prevalence(root.join("prevalence/nhis_cdc_15.csv"))?;
    let pile = rank_from_counts(&counts, Category::RaceEthnicity, 250)?;
    let real = rank_from_prevalence(&prevalence, Category::RaceEthnicity);

    // prevalence lacks Pacific Islander rates; compare on shared subgroups
    let (pile, real) = RankTable::restrict_to_shared(&pile, &real);
    let taus = compare_tables(&pile, &real)?;
    for t in &taus {
        println!("{:<24} tau = {:+.2} (n = {})", t.disease, t.tau, t.n);
    }
    println!(
        "mean tau, corpus vs prevalence: {:+.3}",
        mean_tau(&taus).unwrap_or(f64::NAN)
    );

    let means = mean_logits(&load_logits(root.join("logits/llama3_70b_gold15.jsonl"))?)?;
    let base = rank_from_logits(
        &means,
        "meta-llama/Meta-Llama-3-70B",
        "en",
        Category::RaceEthnicity,
    )?;
    let mut tuned = base.clone();
    tuned.source = "tuned".into();
    for (i, row) in tuned.rows.values_mut().enumerate() {
        if i % 3 == 0 {
            // swap the top two subgroups
            let mut order = row.order().to_vec();
            order.swap(0, 1);
            *row = RankRow::from_ranks(
                order
                    .into_iter()
                    .enumerate()
                    .map(|(r, s)| (s, r as u32 + 1)),
            );
        }
    }
    let report = drift(&base, &tuned)?;
    println!(
        "\ndrift {} -> {}: delta = {:.3}",
        report.base_model,
        report.aligned_model,
        report.delta.unwrap_or(f64::NAN)
    );
    println!("self drift: {:?}", drift(&base, &base)?.delta);
    Ok(())
}
