//! Shuffles a fixture's sentences and merges two fixtures of the same
//! domain, showing that the entity set does not depend on sentence order.

use std::collections::BTreeSet;

use remod::corpus::{merge, shuffle};
use remod::fixtures::fixture;
use remod::pipeline::{run, PipelineConfig, PipelineOutput};

fn names(out: &PipelineOutput) -> BTreeSet<String> {
    out.er
        .model
        .entities
        .iter()
        .map(|e| e.name.clone())
        .collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = fixture("cs3_witness_ucs")?;
    let base = run(&f.doc, &f.lexicon, PipelineConfig::default());
    for seed in 0..5 {
        let shuffled = shuffle(&f.doc, seed);
        let out = run(&shuffled, &f.lexicon, PipelineConfig::default());
        let first = shuffled
            .sentences
            .first()
            .map(|s| s.text.as_str())
            .unwrap_or("");
        println!(
            "seed {seed}: same entities = {}, first sentence: {first}",
            names(&out) == names(&base)
        );
    }

    let a = fixture("b1_ieee")?;
    let b = fixture("b1_general")?;
    let merged = merge(&[a.doc.clone(), b.doc.clone()])?;
    println!(
        "\nmerged {} ({} sentences)",
        merged.source_id,
        merged.sentences.len()
    );
    let out = run(&merged, &a.lexicon, PipelineConfig::default());
    for e in &out.er.model.entities {
        println!("  {:<12} {}", e.name, e.frequency);
    }
    Ok(())
}
