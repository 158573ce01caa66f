//! Builds a one-sentence dependency document by hand, in the native text
//! format, and extracts its model.

use remod::depgraph::{parse_native, to_native_string, LabelNormalizer};
use remod::lexicon::Lexicon;
use remod::pipeline::{run, PipelineConfig};

const DOC: &str = "\
#doc library general

#sent 1 none
The member borrows 3 books.
T 1 The the DT
T 2 member member NN
T 3 borrows borrow VBZ
T 4 3 3 CD
T 5 books book NNS
T 6 . . .
D 0 det 2 1
D 1 nsubj 3 2
D 2 root 0 3
D 3 nummod 5 4
D 4 dobj 3 5
D 5 punct 3 6
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = parse_native(DOC, &LabelNormalizer::default())?;
    doc.validate()?;
    let out = run(&doc, &Lexicon::default(), PipelineConfig::default());
    for r in &out.er.model.relationships {
        println!("relationship: {}", r.key());
    }
    for c in &out.er.model.cardinalities {
        println!("cardinality: {} = {}", c.entity, c.value);
    }
    print!("\n{}", to_native_string(&doc));
    Ok(())
}
