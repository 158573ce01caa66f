//! Checked-in parses and gold annotations for the worked examples.
//!
//! Each fixture bundles the source text, a frozen dependency parse in the
//! native format, the gold model and a lexicon overlay applied on top of the
//! defaults. Two fixtures also carry a strict gold variant that leaves out
//! relationships whose printed form looks like an attachment slip.

use serde::Deserialize;

use crate::depgraph::{parse_native, LabelNormalizer, ParsedDocument};
use crate::error::{Error, Result};
use crate::eval::GoldAnnotation;
use crate::lexicon::Lexicon;

/// Raw files of one fixture, embedded at build time.
#[derive(Debug, Clone, Copy)]
pub struct FixtureFiles {
    pub name: &'static str,
    pub source: &'static str,
    pub parse: &'static str,
    pub gold: &'static str,
    pub strict_gold: Option<&'static str>,
    pub lexicon: &'static str,
}

macro_rules! fixture_files {
    ($name:literal) => {
        fixture_files!($name, None)
    };
    ($name:literal, strict) => {
        fixture_files!(
            $name,
            Some(include_str!(concat!(
                "../fixtures/",
                $name,
                "/gold_strict.json"
            )))
        )
    };
    ($name:literal, $strict:expr) => {
        FixtureFiles {
            name: $name,
            source: include_str!(concat!("../fixtures/", $name, "/source.txt")),
            parse: include_str!(concat!("../fixtures/", $name, "/parse.deps")),
            gold: include_str!(concat!("../fixtures/", $name, "/gold.json")),
            strict_gold: $strict,
            lexicon: include_str!(concat!("../fixtures/", $name, "/lexicon.txt")),
        }
    };
}

pub const FILES: &[FixtureFiles] = &[
    fixture_files!("cs1_online_order", strict),
    fixture_files!("cs2_user_stories"),
    fixture_files!("cs3_witness_ucs", strict),
    fixture_files!("b1_ieee"),
    fixture_files!("b1_general"),
    fixture_files!("b1_descriptive"),
    fixture_files!("b1_paragraph"),
    fixture_files!("b2_ucs1"),
    fixture_files!("b2_ucs2"),
];

pub const MANIFEST: &str = include_str!("../fixtures/manifest.json");

/// One manifest record: where the fixture's parse came from and which
/// domain it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub domain: String,
    pub format: String,
    pub description: String,
    /// `printed` when every dependency list was transcribed from a printed
    /// listing, `audited` when produced by a parser and then hand-checked,
    /// `hand-authored` when written directly in enhanced dependency
    /// conventions.
    pub parse_origin: String,
    /// Sentences whose dependencies match a printed listing exactly.
    #[serde(default)]
    pub printed_sentences: Vec<usize>,
}

pub fn manifest() -> Vec<ManifestEntry> {
    serde_json::from_str(MANIFEST).expect("fixture manifest is valid")
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|f| f.name)
}

pub fn files(name: &str) -> Result<&'static FixtureFiles> {
    FILES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub domain: String,
    pub doc: ParsedDocument,
    pub gold: GoldAnnotation,
    pub strict_gold: Option<GoldAnnotation>,
    pub lexicon: Lexicon,
    pub source: &'static str,
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let f = files(name)?;
    let doc = parse_native(f.parse, &LabelNormalizer::default())?;
    let gold = GoldAnnotation::from_json(f.gold)?;
    let strict_gold = f.strict_gold.map(GoldAnnotation::from_json).transpose()?;
    let lexicon = Lexicon::default().overlay(f.lexicon)?;
    let domain = manifest()
        .into_iter()
        .find(|m| m.name == name)
        .map(|m| m.domain)
        .unwrap_or_default();
    Ok(Fixture {
        name: f.name,
        domain,
        doc,
        gold,
        strict_gold,
        lexicon,
        source: f.source,
    })
}
