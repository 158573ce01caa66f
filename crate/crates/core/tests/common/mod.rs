//! Helpers shared by the integration tests: a compact sentence notation and
//! flat views of pipeline output.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write as _;

use remod::depgraph::{parse_native, DocFormat, LabelNormalizer, ParsedDocument};
use remod::lexicon::Lexicon;
use remod::pipeline::{run, PipelineConfig, PipelineOutput};

/// One sentence in compact notation.
///
/// `tag` is the flow tag with an optional step label (`"alternate 1a"`).
/// `tokens` lists `surface/POS[/lemma]`; the lemma defaults to the
/// lower-cased surface. `deps` lists `label governor dependent` triples
/// separated by `;`.
#[derive(Debug, Clone, Copy)]
pub struct Compact<'a> {
    pub tag: &'a str,
    pub tokens: &'a str,
    pub deps: &'a str,
}

pub fn main_sentence<'a>(tokens: &'a str, deps: &'a str) -> Compact<'a> {
    Compact {
        tag: "main",
        tokens,
        deps,
    }
}

/// Native-format text for a compact document.
pub fn native_text(id: &str, format: DocFormat, sentences: &[Compact]) -> String {
    let mut out = format!("#doc {id} {}\n", format.as_str());
    for (i, s) in sentences.iter().enumerate() {
        let toks: Vec<(&str, &str, String)> = s
            .tokens
            .split_whitespace()
            .map(|t| {
                let parts: Vec<&str> = t.split('/').collect();
                assert!(parts.len() >= 2, "token `{t}` needs a POS tag");
                let lemma = parts
                    .get(2)
                    .map(|l| l.to_string())
                    .unwrap_or_else(|| parts[0].to_lowercase());
                (parts[0], parts[1], lemma)
            })
            .collect();
        let text: Vec<&str> = toks.iter().map(|t| t.0).collect();
        let _ = writeln!(out, "\n#sent {} {}", i + 1, s.tag);
        let _ = writeln!(out, "{}", text.join(" "));
        for (j, (surface, pos, lemma)) in toks.iter().enumerate() {
            let _ = writeln!(out, "T {} {surface} {lemma} {pos}", j + 1);
        }
        for (k, d) in s
            .deps
            .split(';')
            .map(str::trim)
            .filter(|d| !d.is_empty())
            .enumerate()
        {
            let _ = writeln!(out, "D {k} {d}");
        }
    }
    out
}

pub fn document(format: DocFormat, sentences: &[Compact]) -> ParsedDocument {
    parse_native(
        &native_text("t", format, sentences),
        &LabelNormalizer::default(),
    )
    .expect("compact document parses")
}

pub fn single(tokens: &str, deps: &str) -> ParsedDocument {
    document(DocFormat::General, &[main_sentence(tokens, deps)])
}

pub fn extract(doc: &ParsedDocument) -> PipelineOutput {
    run(doc, &Lexicon::default(), PipelineConfig::default())
}

pub fn extract_with(doc: &ParsedDocument, lex: &Lexicon, config: PipelineConfig) -> PipelineOutput {
    run(doc, lex, config)
}

/// `name:frequency` per entity.
pub fn entities(out: &PipelineOutput) -> BTreeSet<String> {
    out.er
        .model
        .entities
        .iter()
        .map(|e| format!("{}:{}", e.name, e.frequency))
        .collect()
}

pub fn entity_names(out: &PipelineOutput) -> BTreeSet<String> {
    out.er
        .model
        .entities
        .iter()
        .map(|e| e.name.clone())
        .collect()
}

/// `owner.name`, or `-.name` for an unowned attribute.
pub fn attributes(out: &PipelineOutput) -> BTreeSet<String> {
    out.er
        .model
        .attributes
        .iter()
        .map(|a| format!("{}.{}", a.owner.as_deref().unwrap_or("-"), a.name))
        .collect()
}

/// `subject (verb) object` per relationship.
pub fn relationships(out: &PipelineOutput) -> BTreeSet<String> {
    out.er
        .model
        .relationships
        .iter()
        .map(|r| r.key().to_string())
        .collect()
}

/// `entity=value` with `@relationship` when attached, `~k` for a modality.
pub fn cardinalities(out: &PipelineOutput) -> BTreeSet<String> {
    out.er
        .model
        .cardinalities
        .iter()
        .map(|c| {
            let mut s = format!("{}={}", c.entity, c.value);
            if let Some(m) = c.modality {
                let _ = write!(s, "~{m}");
            }
            if let Some(k) = &c.relationship {
                let _ = write!(s, "@{k}");
            }
            s
        })
        .collect()
}

/// `attribute:role`.
pub fn roles(out: &PipelineOutput) -> BTreeSet<String> {
    out.roles
        .iter()
        .map(|r| format!("{}:{}", r.attribute, r.role))
        .collect()
}

/// `path actor verb` per BP step, in step order.
pub fn steps(out: &PipelineOutput) -> Vec<String> {
    out.bp
        .model
        .steps
        .iter()
        .map(|s| format!("{} {} {}", s.path, s.actor, s.verb))
        .collect()
}

pub fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Rule numbers recorded in entity and attribute provenance.
pub fn er_rules(out: &PipelineOutput) -> BTreeSet<u8> {
    let m = &out.er.model;
    m.entities
        .iter()
        .flat_map(|e| e.provenance.iter())
        .chain(m.attributes.iter().flat_map(|a| a.provenance.iter()))
        .map(|p| p.rule)
        .collect()
}

pub fn relationship_rules(out: &PipelineOutput) -> BTreeSet<u8> {
    out.er
        .model
        .relationships
        .iter()
        .flat_map(|r| r.provenance.iter())
        .map(|p| p.rule)
        .collect()
}
pub mod rules;
