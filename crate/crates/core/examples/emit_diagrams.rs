//! Writes the ER and BP diagrams of a fixture as Graphviz text.
//!
//!     cargo run --example emit_diagrams -- cs3_witness_ucs > bp.dot

use remod::emit::{bp_diagram, er_diagram};
use remod::fixtures::fixture;
use remod::pipeline::{run, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "b2_ucs1".into());
    let f = fixture(&name)?;
    let out = run(&f.doc, &f.lexicon, PipelineConfig::default());
    let model = out.model_document();
    println!("{}", er_diagram(&model.er_model()));
    println!("{}", bp_diagram(&model.bp_model()));
    Ok(())
}
