//! Entity-relationship extraction: entities and attributes, relationships,
//! then cardinalities, each pass reusing the typed dependencies of the
//! previous one.

mod cardinality;
mod entities;
mod relationships;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::depgraph::ParsedDocument;
use crate::lexicon::Lexicon;

pub use cardinality::extract_cardinalities;
pub use entities::{attach_attributes, extract_entities_attributes, Extraction, SentenceRoles};
pub use relationships::{extract_relationships, RelationshipInstance, Relationships};

/// One typed-dependency match: sentence, dependency ordinal and the rule
/// number that fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub seq: usize,
    pub ordinal: usize,
    pub rule: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub name: String,
    pub frequency: usize,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub owner: Option<String>,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelOrigin {
    Direct,
    Preposition,
    Dataflow,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelKey {
    pub subject: String,
    pub verb_phrase: String,
    pub object: String,
}

impl fmt::Display for RelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}) {}", self.subject, self.verb_phrase, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relationship {
    pub subject: String,
    pub verb_phrase: String,
    pub object: String,
    pub origin: RelOrigin,
    pub provenance: Vec<Provenance>,
}

impl Relationship {
    pub fn key(&self) -> RelKey {
        RelKey {
            subject: self.subject.clone(),
            verb_phrase: self.verb_phrase.clone(),
            object: self.object.clone(),
        }
    }
}

/// Cardinality of one end: `1`, `N` or an exact count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CardValue {
    One,
    Many,
    Exact(u32),
}

impl fmt::Display for CardValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardValue::One => f.write_str("1"),
            CardValue::Many => f.write_str("N"),
            CardValue::Exact(k) => write!(f, "{k}"),
        }
    }
}

impl From<CardValue> for String {
    fn from(v: CardValue) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for CardValue {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl FromStr for CardValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "1" | "one" | "ONE" => Ok(CardValue::One),
            "N" | "n" | "*" | "many" => Ok(CardValue::Many),
            other => match other.parse::<u32>() {
                Ok(k) if k >= 1 => Ok(CardValue::Exact(k)),
                _ => Err(format!("invalid cardinality `{other}`")),
            },
        }
    }
}

impl CardValue {
    /// `Exact(1)` and `One` describe the same end.
    pub fn normalized(self) -> CardValue {
        match self {
            CardValue::Exact(1) => CardValue::One,
            v => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CardSource {
    Keyword,
    Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cardinality {
    pub entity: String,
    pub relationship: Option<RelKey>,
    pub value: CardValue,
    pub modality: Option<u32>,
    pub source: CardSource,
}

/// How "each" is read as a determiner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EachMode {
    /// `N` on the determiner's own entity.
    N,
    /// `1` on its own entity and `N` on the other end of the relationship.
    #[default]
    One,
}

impl FromStr for EachMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "n" | "N" => Ok(EachMode::N),
            "one" => Ok(EachMode::One),
            other => Err(format!("unknown each mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub seq: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(seq: Option<usize>, message: impl Into<String>) -> Self {
        Diagnostic {
            seq,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ERModel {
    pub entities: Vec<Entity>,
    pub attributes: Vec<Attribute>,
    pub relationships: Vec<Relationship>,
    pub cardinalities: Vec<Cardinality>,
}

impl ERModel {
    pub fn entity(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.name == name)
    }

    pub fn entity_names(&self) -> Vec<&str> {
        self.entities.iter().map(|e| e.name.as_str()).collect()
    }

    /// Sorts every collection into its canonical order.
    pub fn sort(&mut self) {
        self.entities.sort_by(|a, b| a.name.cmp(&b.name));
        self.attributes
            .sort_by(|a, b| (&a.owner, &a.name).cmp(&(&b.owner, &b.name)));
        self.relationships.sort_by_key(|r| r.key());
        self.cardinalities.sort_by(card_order);
    }
}

fn card_order(a: &Cardinality, b: &Cardinality) -> Ordering {
    (&a.relationship, &a.entity, a.value, a.modality).cmp(&(
        &b.relationship,
        &b.entity,
        b.value,
        b.modality,
    ))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ErConfig {
    pub each_mode: EachMode,
}

/// Full result of the three ER passes, with the per-sentence token roles
/// later stages reuse.
#[derive(Debug, Clone)]
pub struct ErOutput {
    pub model: ERModel,
    pub extraction: Extraction,
    pub relationships: Relationships,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn build_er_model(doc: &ParsedDocument, lex: &Lexicon, config: ErConfig) -> ErOutput {
    let mut extraction = extract_entities_attributes(doc, lex);
    extraction.attributes = attach_attributes(&extraction, doc);
    let relationships = extract_relationships(doc, &extraction, lex);
    let (cardinalities, card_diags) =
        extract_cardinalities(doc, &extraction, &relationships, lex, config.each_mode);
    let mut diagnostics = extraction.diagnostics.clone();
    diagnostics.extend(relationships.diagnostics.iter().cloned());
    diagnostics.extend(card_diags);
    let mut model = ERModel {
        entities: extraction.entities.clone(),
        attributes: extraction.attributes.clone(),
        relationships: relationships.relationships.clone(),
        cardinalities,
    };
    model.sort();
    ErOutput {
        model,
        extraction,
        relationships,
        diagnostics,
    }
}
