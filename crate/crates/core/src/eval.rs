//! Scoring extracted models against gold annotations.
//!
//! Names are compared as multisets of stemmed, lower-cased words, so
//! "Credit Card", "card, credit" and "credit cards" all agree. Relationships
//! match on their two endpoints, in either order, and the stem of the first
//! word of the verb.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use num_rational::Ratio;
use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::bp::FlowPath;
use crate::dataflow::Role;
use crate::emit::ModelDocument;
use crate::er::CardValue;
use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GoldEntity {
    Name(String),
    Counted {
        name: String,
        frequency: Option<usize>,
    },
}

impl GoldEntity {
    pub fn name(&self) -> &str {
        match self {
            GoldEntity::Name(n) | GoldEntity::Counted { name: n, .. } => n,
        }
    }

    pub fn frequency(&self) -> Option<usize> {
        match self {
            GoldEntity::Name(_) => None,
            GoldEntity::Counted { frequency, .. } => *frequency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldAttribute {
    #[serde(default)]
    pub owner: Option<String>,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoldRelationship {
    pub subject: String,
    pub verb: String,
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldCardinality {
    pub entity: String,
    pub value: CardValue,
    #[serde(default)]
    pub relationship: Option<GoldRelationship>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldRole {
    pub attribute: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldOperation {
    pub path: FlowPath,
    pub actor: String,
    pub verb: String,
}

/// Reference model in the gold schema. Absent sections are empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldAnnotation {
    #[serde(default)]
    pub entities: Vec<GoldEntity>,
    #[serde(default)]
    pub attributes: Vec<GoldAttribute>,
    #[serde(default)]
    pub relationships: Vec<GoldRelationship>,
    #[serde(default)]
    pub cardinalities: Vec<GoldCardinality>,
    #[serde(default)]
    pub roles: Vec<GoldRole>,
    #[serde(default)]
    pub operations: Vec<GoldOperation>,
}

impl GoldAnnotation {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("gold file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// The gold annotation a model would need to score perfectly.
    pub fn from_model(m: &ModelDocument) -> Self {
        GoldAnnotation {
            entities: m
                .entities
                .iter()
                .map(|e| GoldEntity::Counted {
                    name: e.name.clone(),
                    frequency: Some(e.frequency),
                })
                .collect(),
            attributes: m
                .attributes
                .iter()
                .map(|a| GoldAttribute {
                    owner: a.owner.clone(),
                    name: a.name.clone(),
                })
                .collect(),
            relationships: m.relationships.iter().map(gold_rel).collect(),
            cardinalities: m
                .cardinalities
                .iter()
                .map(|c| GoldCardinality {
                    entity: c.entity.clone(),
                    value: c.value,
                    relationship: c.relationship.as_ref().map(|k| GoldRelationship {
                        subject: k.subject.clone(),
                        verb: k.verb_phrase.clone(),
                        object: k.object.clone(),
                    }),
                })
                .collect(),
            roles: m
                .data_roles
                .iter()
                .map(|r| GoldRole {
                    attribute: r.attribute.clone(),
                    role: r.role,
                })
                .collect(),
            operations: m
                .bp_steps
                .iter()
                .map(|s| GoldOperation {
                    path: s.path,
                    actor: s.actor.clone(),
                    verb: s.verb.clone(),
                })
                .collect(),
        }
    }
}

fn gold_rel(r: &crate::er::Relationship) -> GoldRelationship {
    GoldRelationship {
        subject: r.subject.clone(),
        verb: r.verb_phrase.clone(),
        object: r.object.clone(),
    }
}

/// Word-level normalization shared by every comparison.
pub struct Normalizer {
    stemmer: Stemmer,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer {
            stemmer: Stemmer::create(Algorithm::English),
        }
    }
}

const IRREGULAR: &[(&str, &str)] = &[
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("bought", "buy"),
    ("chose", "choose"),
    ("chosen", "choose"),
    ("found", "find"),
    ("gave", "give"),
    ("given", "give"),
    ("got", "get"),
    ("saw", "see"),
    ("seen", "see"),
    ("sent", "send"),
    ("took", "take"),
    ("taken", "take"),
];

impl Normalizer {
    pub fn word(&self, w: &str) -> String {
        let lower = w.to_lowercase();
        let base = IRREGULAR
            .iter()
            .find(|(from, _)| *from == lower)
            .map(|(_, to)| *to)
            .unwrap_or(&lower);
        self.stemmer.stem(base).into_owned()
    }

    /// Sorted stems of the words of a name.
    pub fn name(&self, name: &str) -> Vec<String> {
        let mut words: Vec<String> = name
            .split(|c: char| !c.is_alphanumeric())
            .filter(|w| !w.is_empty())
            .map(|w| self.word(w))
            .collect();
        words.sort();
        words
    }

    /// Stem of the first word of a verb phrase.
    pub fn verb(&self, verb: &str) -> String {
        verb.split_whitespace()
            .next()
            .map(|w| self.word(w))
            .unwrap_or_default()
    }

    /// An attribute name with its owner's words removed ("witness address"
    /// owned by witness → address).
    pub fn attribute(&self, owner: Option<&str>, name: &str) -> (Option<Vec<String>>, Vec<String>) {
        let words = self.name(name);
        let Some(owner) = owner else {
            return (None, words);
        };
        let owner_words = self.name(owner);
        let stripped: Vec<String> = words
            .iter()
            .filter(|w| !owner_words.contains(w))
            .cloned()
            .collect();
        let name = if stripped.is_empty() { words } else { stripped };
        (Some(owner_words), name)
    }

    pub fn relationship(
        &self,
        subject: &str,
        verb: &str,
        object: &str,
    ) -> (Vec<String>, Vec<String>, String) {
        let (a, b) = (self.name(subject), self.name(object));
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        (a, b, self.verb(verb))
    }
}

/// Match counts for one artefact kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

/// Set comparison of normalized keys.
pub fn match_sets<K: Ord + Clone>(extracted: &[K], gold: &[K]) -> Counts {
    let e: BTreeSet<&K> = extracted.iter().collect();
    let g: BTreeSet<&K> = gold.iter().collect();
    let tp = e.intersection(&g).count();
    Counts {
        tp,
        fp: e.len() - tp,
        fn_: g.len() - tp,
    }
}

/// Recall, precision and F1 as exact percentages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub rcl: Rational,
    pub prc: Rational,
    pub f1: Rational,
}

/// Rounded percentages as reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rounded {
    pub rcl: u32,
    pub prc: u32,
    pub f1: u32,
}

fn percent(num: Rational, den: Rational) -> Rational {
    if den == Rational::from_integer(0) {
        Rational::from_integer(0)
    } else {
        num * Rational::from_integer(100) / den
    }
}

/// Rounds half up.
pub fn round_half_up(x: Rational) -> u32 {
    (x + Rational::new(1, 2)).floor().to_integer() as u32
}

impl Metrics {
    pub fn rounded(&self) -> Rounded {
        Rounded {
            rcl: round_half_up(self.rcl),
            prc: round_half_up(self.prc),
            f1: round_half_up(self.f1),
        }
    }
}

/// Metrics from true positives, false positives and false negatives, which
/// may be counts or percentage masses.
pub fn metrics(tp: Rational, fp: Rational, fn_: Rational) -> Result<Metrics> {
    let zero = Rational::from_integer(0);
    for (name, v) in [("tp", tp), ("fp", fp), ("fn", fn_)] {
        if v < zero {
            return Err(Error::InvalidCount(format!("{name} = {v} is negative")));
        }
    }
    let two = Rational::from_integer(2);
    Ok(Metrics {
        rcl: percent(tp, tp + fn_),
        prc: percent(tp, tp + fp),
        f1: percent(two * tp, two * tp + fp + fn_),
    })
}

pub fn metrics_from_counts(c: Counts) -> Metrics {
    let r = |n: usize| Rational::from_integer(n as i128);
    metrics(r(c.tp), r(c.fp), r(c.fn_)).expect("counts are non-negative")
}

/// Parses a decimal such as `87.8` exactly.
pub fn parse_mass(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidCount(format!("`{text}` is not a decimal number"));
    let (negative, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return Err(bad());
    }
    let whole: i128 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let scale = 10i128.pow(frac.len() as u32);
    let part: i128 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let v = Rational::new(whole * scale + part, scale);
    Ok(if negative { -v } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Entities,
    Attributes,
    Relationships,
    Cardinalities,
    EntityCardinalities,
    Roles,
    Operations,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Entities => "entities",
            Kind::Attributes => "attributes",
            Kind::Relationships => "relationships",
            Kind::Cardinalities => "cardinalities",
            Kind::EntityCardinalities => "entity_cardinalities",
            Kind::Roles => "roles",
            Kind::Operations => "operations",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub kind: Kind,
    #[serde(flatten)]
    pub counts: Counts,
    #[serde(flatten)]
    pub rounded: Rounded,
    /// tp/fp/fn as percentages of their sum, one decimal.
    pub masses: [String; 3],
}

impl ReportRow {
    pub fn new(kind: Kind, counts: Counts) -> Self {
        let total = counts.tp + counts.fp + counts.fn_;
        let mass = |n: usize| {
            if total == 0 {
                "0.0".to_string()
            } else {
                let tenths = round_half_up(Rational::new(1000 * n as i128, total as i128));
                format!("{}.{}", tenths / 10, tenths % 10)
            }
        };
        ReportRow {
            kind,
            counts,
            rounded: metrics_from_counts(counts).rounded(),
            masses: [mass(counts.tp), mass(counts.fp), mass(counts.fn_)],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
}

impl EvalReport {
    pub fn row(&self, kind: Kind) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.kind == kind)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<22}{:>5}{:>5}{:>5}{:>6}{:>6}{:>6}\n",
            "kind", "TP", "FP", "FN", "RCL", "PRC", "F1"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<22}{:>5}{:>5}{:>5}{:>6}{:>6}{:>6}\n",
                r.kind.to_string(),
                r.counts.tp,
                r.counts.fp,
                r.counts.fn_,
                r.rounded.rcl,
                r.rounded.prc,
                r.rounded.f1
            ));
        }
        out
    }
}

type RelKeyN = (Vec<String>, Vec<String>, String);

/// Normalized keys of every artefact kind, for one side of a comparison.
#[derive(Debug, Default)]
pub struct Keys {
    pub entities: Vec<Vec<String>>,
    pub attributes: Vec<(Option<Vec<String>>, Vec<String>)>,
    pub relationships: Vec<RelKeyN>,
    pub cardinalities: Vec<(Option<RelKeyN>, Vec<String>, CardValue)>,
    pub entity_cardinalities: Vec<(Vec<String>, CardValue)>,
    pub roles: Vec<(Vec<String>, Role)>,
    pub operations: Vec<(FlowPath, Vec<String>, String)>,
}

impl Keys {
    pub fn of_gold(g: &GoldAnnotation, n: &Normalizer) -> Self {
        let card = |c: &GoldCardinality| {
            (
                c.relationship
                    .as_ref()
                    .map(|r| n.relationship(&r.subject, &r.verb, &r.object)),
                n.name(&c.entity),
                c.value.normalized(),
            )
        };
        Keys {
            entities: g.entities.iter().map(|e| n.name(e.name())).collect(),
            attributes: g
                .attributes
                .iter()
                .map(|a| n.attribute(a.owner.as_deref(), &a.name))
                .collect(),
            relationships: g
                .relationships
                .iter()
                .map(|r| n.relationship(&r.subject, &r.verb, &r.object))
                .collect(),
            cardinalities: g.cardinalities.iter().map(card).collect(),
            entity_cardinalities: g
                .cardinalities
                .iter()
                .map(|c| (n.name(&c.entity), c.value.normalized()))
                .collect(),
            roles: g
                .roles
                .iter()
                .map(|r| (n.name(&r.attribute), r.role))
                .collect(),
            operations: g
                .operations
                .iter()
                .map(|o| (o.path, n.name(&o.actor), n.verb(&o.verb)))
                .collect(),
        }
    }

    pub fn of_model(m: &ModelDocument, n: &Normalizer) -> Self {
        Self::of_gold(&GoldAnnotation::from_model(m), n)
    }
}

/// Compares two annotations kind by kind. Kinds empty on both sides are
/// left out of the report.
pub fn compare(extracted: &GoldAnnotation, gold: &GoldAnnotation) -> EvalReport {
    let n = Normalizer::default();
    let (e, g) = (Keys::of_gold(extracted, &n), Keys::of_gold(gold, &n));
    let mut rows = Vec::new();
    let mut add = |kind, c: Counts| {
        if c.tp + c.fp + c.fn_ > 0 {
            rows.push(ReportRow::new(kind, c));
        }
    };
    add(Kind::Entities, match_sets(&e.entities, &g.entities));
    add(Kind::Attributes, match_sets(&e.attributes, &g.attributes));
    add(
        Kind::Relationships,
        match_sets(&e.relationships, &g.relationships),
    );
    add(
        Kind::Cardinalities,
        match_sets(&e.cardinalities, &g.cardinalities),
    );
    add(
        Kind::EntityCardinalities,
        match_sets(&e.entity_cardinalities, &g.entity_cardinalities),
    );
    add(Kind::Roles, match_sets(&e.roles, &g.roles));
    add(Kind::Operations, match_sets(&e.operations, &g.operations));
    EvalReport { rows }
}

pub fn evaluate(model: &ModelDocument, gold: &GoldAnnotation) -> EvalReport {
    compare(&GoldAnnotation::from_model(model), gold)
}

pub fn evaluate_files(model: impl AsRef<Path>, gold: impl AsRef<Path>) -> Result<EvalReport> {
    let m = ModelDocument::load(model)?;
    let g = GoldAnnotation::load(gold)?;
    Ok(evaluate(&m, &g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        parse_mass(s).unwrap()
    }

    #[test]
    fn set_difference() {
        let n = Normalizer::default();
        let e: Vec<_> = ["customer", "order"].iter().map(|x| n.name(x)).collect();
        let g: Vec<_> = ["customer", "order", "product"]
            .iter()
            .map(|x| n.name(x))
            .collect();
        assert_eq!(
            match_sets(&e, &g),
            Counts {
                tp: 2,
                fp: 0,
                fn_: 1
            }
        );
    }

    #[test]
    fn names_normalize() {
        let n = Normalizer::default();
        assert_eq!(n.name("Credit Card"), n.name("credit card"));
        assert_eq!(n.name("Card, credit"), n.name("credit card"));
        assert_eq!(n.verb("purchases"), n.verb("purchase"));
        assert_eq!(n.verb("has"), n.verb("have"));
    }

    #[test]
    fn table_thirteen_entities_row() {
        let m = metrics(r("87.8"), r("4.9"), r("7.3")).unwrap().rounded();
        assert_eq!((m.rcl, m.prc, m.f1), (92, 95, 94));
    }

    #[test]
    fn empty_denominators_are_zero() {
        let m = metrics(r("0"), r("0"), r("0")).unwrap().rounded();
        assert_eq!((m.rcl, m.prc, m.f1), (0, 0, 0));
    }

    #[test]
    fn negative_count_is_rejected() {
        assert!(metrics(r("-1"), r("0"), r("0")).is_err());
    }

    #[test]
    fn half_rounds_up() {
        assert_eq!(round_half_up(Rational::new(185, 2)), 93);
        assert_eq!(round_half_up(Rational::new(1849, 20)), 92);
    }

    #[test]
    fn mass_parsing() {
        assert_eq!(r("87.8"), Rational::new(439, 5));
        assert_eq!(r("5"), Rational::from_integer(5));
        assert!(parse_mass("8.7.8").is_err());
        assert!(parse_mass("").is_err());
    }
}
