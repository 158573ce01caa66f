//! Scores the extracted model of every fixture against its gold annotation.

use remod::eval::{evaluate, Kind};
use remod::fixtures::{fixture, names};
use remod::pipeline::{run, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in names() {
        let f = fixture(name)?;
        let out = run(&f.doc, &f.lexicon, PipelineConfig::default());
        let report = evaluate(&out.model_document(), &f.gold);
        println!("== {name}");
        print!("{}", report.to_table());
        if let Some(row) = report.row(Kind::Entities) {
            println!("entity F1 {}", row.rounded.f1);
        }
        println!();
    }
    Ok(())
}
