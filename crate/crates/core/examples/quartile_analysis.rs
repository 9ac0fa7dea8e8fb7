//! Mean corpus-vs-prevalence tau per quartile of disease co-occurrence totals.
//!
//! cargo run --example quartile_analysis

use std::collections::BTreeMap;
use std::fs::File;
use std::path::PathBuf;

use cooccur_audit::stats::compare_tables;
use cooccur_audit::{
    load_prevalence, quartile_tau, rank_from_counts, rank_from_prevalence, Category,
    CoOccurrenceMatrix, RankTable,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let counts = CoOccurrenceMatrix::read_csv(File::open(root.join("counts/pile_w250.csv"))?)?;
    let prevalence = load_prevalence(root.join("prevalence/nhis_cdc_15.csv"))?;

    for category in Category::DEMOGRAPHIC {
        let (pile, real) = RankTable::restrict_to_shared(
            &rank_from_counts(&counts, category, 250)?,
            &rank_from_prevalence(&prevalence, category),
        );
        let taus = compare_tables(&pile, &real)?;
        let totals: BTreeMap<String, u64> = counts
            .layout()
            .diseases()
            .iter()
            .map(|d| {
                (
                    d.clone(),
                    counts.disease_total(d, category, 250).unwrap_or(0),
                )
            })
            .collect();
        println!("== {category} ==");
        for q in quartile_tau(&taus, &totals)? {
            println!(
                "Q{} totals {:>7}..{:<7} mean tau {:+.3}  {:?}",
                q.quartile,
                q.min_total.unwrap_or(0),
                q.max_total.unwrap_or(0),
                q.mean_tau.unwrap_or(f64::NAN),
                q.diseases
            );
        }
    }
    Ok(())
}
