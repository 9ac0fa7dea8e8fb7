//! Renders the prompts for one (disease, subgroup) pair in every bundled
//! language, then the full English race matrix as JSONL.
//!
//! cargo run --example render_templates

use std::path::PathBuf;

use cooccur_audit::templates::prompts_to_jsonl;
use cooccur_audit::{load_dictionary, render, render_matrix, Category, TemplateSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let bundle = load_dictionary(root.join("dictionaries/disease_demographics.json"))?;
    let asthma = bundle
        .find(Category::Disease, "asthma")
        .expect("asthma in dictionary");
    let black = bundle
        .find(Category::RaceEthnicity, "black")
        .expect("black in dictionary");

    for lang in ["en", "zh", "es", "fr"] {
        let t = TemplateSet::load(root.join(format!("templates/{lang}.json")))?;
        println!("[{lang}]");
        for p in render(&t, asthma, black)?.iter().take(3) {
            println!("  #{} {}", p.template, p.text);
        }
    }

    let en = TemplateSet::load(root.join("templates/en.json"))?;
    let prompts = render_matrix(&en, &bundle, Category::RaceEthnicity)?;
    let jsonl = prompts_to_jsonl(&prompts);
    println!("\n{} English race prompts; first line:", prompts.len());
    println!("{}", jsonl.lines().next().unwrap_or_default());
    Ok(())
}
