//! Orders the sentences of a use-case specification into main and alternate
//! flows, with their step labels. Lines outside the flow sections come last,
//! tagged `none`.

use remod::corpus::{detect_format, sequence_sentences, RawDocument};

const USE_CASE: &str = "\
Use Case: Withdraw cash
Main Flow:
1. Customer inserts the card.
2. System validates the card.
3. Customer enters the amount.
4. System dispenses the cash.
Alternate Flows:
2a. System rejects the card.
2b. System returns to step 1.
";

fn main() {
    let raw = RawDocument::from_text("withdraw", USE_CASE);
    let seq = sequence_sentences(&raw);
    if let Ok(format) = detect_format(&raw) {
        println!("format: {format}");
    }
    for s in &seq.sentences {
        println!(
            "{:<10} {:<4} {}",
            s.flow_tag.as_str(),
            s.step_label.as_deref().unwrap_or("-"),
            s.text
        );
    }
    for w in &seq.warnings {
        eprintln!("warning: {w}");
    }
}
