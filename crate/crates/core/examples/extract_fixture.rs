//! Runs the full pipeline over a bundled fixture and prints the ER and BP
//! models.
//!
//!     cargo run --example extract_fixture -- cs1_online_order

use remod::fixtures::fixture;
use remod::pipeline::{run, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "cs1_online_order".into());
    let f = fixture(&name)?;
    let out = run(&f.doc, &f.lexicon, PipelineConfig::default());

    println!("entities:");
    for e in &out.er.model.entities {
        println!("  {:<16} {}", e.name, e.frequency);
    }
    println!("attributes:");
    for a in &out.er.model.attributes {
        println!("  {:<20} {}", a.name, a.owner.as_deref().unwrap_or("-"));
    }
    println!("relationships:");
    for r in &out.er.model.relationships {
        println!("  {}", r.key());
    }
    println!("cardinalities:");
    for c in &out.er.model.cardinalities {
        match &c.relationship {
            Some(rel) => println!("  {} = {} in {rel}", c.entity, c.value),
            None => println!("  {} = {}", c.entity, c.value),
        }
    }
    println!("data roles:");
    for r in &out.roles {
        println!("  {:<20} {:<6} via {}", r.attribute, r.role, r.operation);
    }
    println!("steps:");
    for s in &out.bp.model.steps {
        println!("  {:>2} {:<9} {} {}", s.step_id, s.path, s.actor, s.verb);
    }
    for d in out.diagnostics() {
        eprintln!("note: {}", d.message);
    }
    Ok(())
}
