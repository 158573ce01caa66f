//! Shows how a lexicon overlay changes what a sentence yields. With the
//! defaults "user" is its own entity; the overlay folds it into "customer"
//! and marks "tax" as a plain attribute word.

use remod::fixtures::fixture;
use remod::lexicon::Lexicon;
use remod::pipeline::{run, PipelineConfig};

const OVERLAY: &str = "\
aliases += user:customer purchase:order
basic_attribs += tax
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = fixture("cs1_online_order")?;
    for (label, lex) in [
        ("defaults", Lexicon::default()),
        ("overlay", Lexicon::default().overlay(OVERLAY)?),
    ] {
        let out = run(&f.doc, &lex, PipelineConfig::default());
        let names: Vec<&str> = out
            .er
            .model
            .entities
            .iter()
            .map(|e| e.name.as_str())
            .collect();
        println!("{label:<9} {}", names.join(", "));
    }
    Ok(())
}
