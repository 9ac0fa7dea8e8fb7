//! Builds rank tables from the bundled corpus counts, prevalence rates and
//! model logits, and prints them side by side for a few diseases.
//!
//! cargo run --example rank_fixture_tables

use std::fs::File;
use std::path::PathBuf;

use cooccur_audit::{
    load_logits, load_prevalence, mean_logits, rank_from_counts, rank_from_logits,
    rank_from_prevalence, Category, CoOccurrenceMatrix,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let counts = CoOccurrenceMatrix::read_csv(File::open(root.join("counts/pile_w250.csv"))?)?;
    let prevalence = load_prevalence(root.join("prevalence/nhis_cdc_15.csv"))?;
    let logits = load_logits(root.join("logits/llama3_70b_gold15.jsonl"))?;
    let means = mean_logits(&logits)?;

    for category in Category::DEMOGRAPHIC {
        let tables = [
            rank_from_counts(&counts, category, 250)?,
            rank_from_prevalence(&prevalence, category),
            rank_from_logits(&means, "meta-llama/Meta-Llama-3-70B", "en", category)?,
        ];
        println!("== {category} ==");
        for disease in ["arthritis", "asthma", "liver_failure"] {
            for t in &tables {
                let row = t.row(disease).expect("disease present");
                let cells: Vec<String> = row
                    .order()
                    .iter()
                    .map(|s| {
                        format!(
                            "{}{}{}",
                            row.rank(s).unwrap(),
                            if row.is_tied(s) { "=" } else { "." },
                            s
                        )
                    })
                    .collect();
                let flag = if row.partial { " (partial)" } else { "" };
                println!("{disease:<14} {:<28} {}{flag}", t.source, cells.join(" "));
            }
        }
    }
    println!(
        "\n{}",
        rank_from_prevalence(&prevalence, Category::Gender)
            .to_csv_string()
            .lines()
            .take(5)
            .collect::<Vec<_>>()
            .join("\n")
    );
    Ok(())
}
