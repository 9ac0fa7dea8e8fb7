//! How stable a model's rankings are across prompt templates.
//!
//! cargo run --example template_robustness

use std::path::PathBuf;

use cooccur_audit::{load_logits, template_pairwise_tau, template_top_agreement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let logits = load_logits(root.join("logits/llama3_70b_gold15.jsonl"))?;
    for (model, language, category) in logits.slices() {
        let top = template_top_agreement(&logits, &model, &language, category)?;
        let pairs = template_pairwise_tau(&logits, &model, &language, category)?;
        println!(
            "{model} [{language}/{category}], {} templates",
            top.n_templates
        );
        println!(
            "  top-subgroup agreement {:.2} +/- {:.2} (max {})",
            top.mean, top.standard_error, top.n_templates
        );
        println!("  mean pairwise tau      {:.3}", pairs.mean);
        let (weakest, tau) = pairs
            .per_disease
            .iter()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("at least one disease");
        println!("  least stable disease   {weakest} ({tau:.3})");
    }
    Ok(())
}
