//! Entities and attributes (rules 1 to 13).
//!
//! Each sentence is scanned once in dependency order. Every rule match adds
//! mentions; names are then completed with their compound chains, and
//! mentions are folded into entities (frequency = number of matches) and
//! attributes.

use std::collections::{BTreeMap, BTreeSet};

use super::{Attribute, Diagnostic, Entity, Provenance};
use crate::anaphora::is_resolved_pronoun;
use crate::depgraph::{ParsedDocument, ParsedSentence, Token, TypedDependency};
use crate::lexicon::Lexicon;

/// Token roles of one sentence after extraction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentenceRoles {
    pub seq: usize,
    /// Token index → entity name.
    pub entities: BTreeMap<usize, String>,
    /// Token index → attribute name.
    pub attributes: BTreeMap<usize, String>,
    /// Attribute token → the entity its compound modifier names
    /// ("payment method" stands for payment).
    pub stands_for: BTreeMap<usize, String>,
}

impl SentenceRoles {
    /// The entity a token denotes, directly or through its modifier.
    pub fn entity_of(&self, token: usize) -> Option<&str> {
        self.entities
            .get(&token)
            .or_else(|| self.stands_for.get(&token))
            .map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AttributeMention {
    pub pos: usize,
    pub token: usize,
    pub name: String,
    pub prov: Provenance,
    pub owner_hint: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub entities: Vec<Entity>,
    pub attributes: Vec<Attribute>,
    /// One entry per sentence, in document order.
    pub roles: Vec<SentenceRoles>,
    pub diagnostics: Vec<Diagnostic>,
    pub(crate) attribute_mentions: Vec<AttributeMention>,
}

impl Extraction {
    pub fn entity_names(&self) -> BTreeSet<&str> {
        self.entities.iter().map(|e| e.name.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Entity,
    Attribute,
}

#[derive(Debug, Clone)]
struct Mention {
    kind: Kind,
    token: usize,
    name: String,
    prov: Provenance,
    counted: bool,
    /// Tokens whose words make up the name.
    tokens: Vec<usize>,
    owner_hint: Option<usize>,
    /// Attribute head token this entity was read off (its compound modifier).
    modifier_of: Option<usize>,
}

struct Scan<'a> {
    s: &'a ParsedSentence,
    lex: &'a Lexicon,
    mentions: Vec<Mention>,
}

impl<'a> Scan<'a> {
    fn tok(&self, i: usize) -> Option<&'a Token> {
        self.s.token(i)
    }

    fn resolved(&self, t: &Token) -> bool {
        is_resolved_pronoun(t, self.lex)
    }

    fn noun_like(&self, t: &Token) -> bool {
        t.is_noun() || t.is_gerund() || self.resolved(t)
    }

    fn word(&self, t: &Token) -> String {
        let base = if t.is_gerund() {
            t.surface.to_lowercase()
        } else {
            t.lemma.clone()
        };
        self.lex.canonical(&base).to_string()
    }

    fn basic(&self, t: &Token) -> bool {
        self.lex.is_basic(&self.word(t))
    }

    /// Compound modifiers of `idx`, recursively, in text order, then `idx`.
    fn chain(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![idx];
        let mut stack = vec![idx];
        while let Some(h) = stack.pop() {
            for d in self.s.children(h) {
                if d.label.is("compound")
                    && d.label.subtype.is_none()
                    && !out.contains(&d.dependent)
                {
                    out.push(d.dependent);
                    stack.push(d.dependent);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The tokens of `tokens` that contribute words to a name.
    fn name_tokens(&self, tokens: &[usize]) -> Vec<usize> {
        tokens
            .iter()
            .copied()
            .filter(|&i| {
                self.tok(i)
                    .map(|t| !self.lex.is_non_entity(&self.word(t)))
                    .unwrap_or(false)
            })
            .collect()
    }

    /// Space-joined words of `tokens` with non-entity nouns left out;
    /// `None` when the head itself is a non-entity noun.
    fn name(&self, tokens: &[usize]) -> Option<String> {
        let head = self.tok(*tokens.last()?)?;
        if self.lex.is_non_entity(&self.word(head)) {
            return None;
        }
        let words: Vec<String> = self
            .name_tokens(tokens)
            .into_iter()
            .filter_map(|i| self.tok(i))
            .map(|t| self.word(t))
            .collect();
        (!words.is_empty()).then(|| words.join(" "))
    }

    fn prov(&self, d: &TypedDependency, rule: u8) -> Provenance {
        Provenance {
            seq: self.s.seq,
            ordinal: d.ordinal,
            rule,
        }
    }

    fn entity(&mut self, idx: usize, prov: Provenance) {
        self.entity_from(idx, prov, None);
    }

    fn entity_from(&mut self, idx: usize, prov: Provenance, modifier_of: Option<usize>) {
        let Some(t) = self.tok(idx) else { return };
        let counted = !self.resolved(t);
        let mut chain = self.chain(idx);
        let mut modifier_of = modifier_of;
        if self.lex.is_generic(&self.word(t)) {
            // "shipping options" names shipping, "surveillance video feed"
            // names surveillance.
            chain.retain(|&i| i != idx);
            while let Some(&last) = chain.last() {
                match self.tok(last) {
                    Some(lt) if self.lex.is_generic(&self.word(lt)) => {
                        chain.pop();
                    }
                    _ => break,
                }
            }
            if chain.is_empty() {
                return;
            }
            modifier_of = modifier_of.or(Some(idx));
        }
        let Some(name) = self.name(&chain) else {
            return;
        };
        self.mentions.push(Mention {
            kind: Kind::Entity,
            token: idx,
            name,
            prov,
            counted,
            tokens: self.name_tokens(&chain),
            owner_hint: None,
            modifier_of,
        });
    }

    /// Registers an attribute headed by `idx`. `adjective` prefixes the name
    /// (rules 5 and 11); `modifier_entity` also registers a non-basic
    /// compound modifier as an entity (rules 2 and 4).
    fn attribute(
        &mut self,
        idx: usize,
        prov: Provenance,
        adjective: Option<usize>,
        modifier_entity: bool,
        owner_hint: Option<usize>,
    ) {
        let Some(head) = self.tok(idx) else { return };
        let chain = self.chain(idx);
        let modifier = chain.len().checked_sub(2).map(|i| chain[i]);
        if self.lex.is_generic(&self.word(head)) {
            // "tax information" names tax; "witness details" names witness.
            let Some(m) = modifier else { return };
            let Some(mt) = self.tok(m) else { return };
            if self.basic(mt) {
                if let Some(name) = self.name(&chain[..chain.len() - 1]) {
                    self.push_attribute(idx, name, prov, owner_hint);
                }
            } else if self.noun_like(mt) {
                self.entity_from(m, prov, Some(idx));
            }
            return;
        }
        let mut tokens = chain.clone();
        if let Some(a) = adjective {
            if !tokens.contains(&a) {
                tokens.insert(0, a);
            }
        }
        let Some(name) = self.name(&tokens) else {
            return;
        };
        let mut owner_hint = owner_hint;
        if modifier_entity {
            if let Some(m) = modifier {
                let mt = self.tok(m).expect("chain token exists");
                if self.noun_like(mt) && !self.basic(mt) && !self.lex.is_non_entity(&self.word(mt))
                {
                    self.entity_from(m, prov, Some(idx));
                    owner_hint = Some(m);
                }
            }
        }
        self.push_attribute(idx, name, prov, owner_hint);
    }

    fn push_attribute(
        &mut self,
        idx: usize,
        name: String,
        prov: Provenance,
        owner_hint: Option<usize>,
    ) {
        let tokens = self.name_tokens(&self.chain(idx));
        self.mentions.push(Mention {
            kind: Kind::Attribute,
            token: idx,
            name,
            prov,
            counted: true,
            tokens,
            owner_hint,
            modifier_of: None,
        });
    }

    fn is_predicate(&self, idx: usize) -> bool {
        match self.tok(idx) {
            Some(t) if t.is_verb() => true,
            Some(_) => self.s.children(idx).any(|d| d.label.is("cop")),
            None => false,
        }
    }

    fn apply(&mut self, d: &TypedDependency) {
        let (Some(a), Some(b)) = (self.tok(d.governor), self.tok(d.dependent)) else {
            return;
        };
        let (ai, bi) = (d.governor, d.dependent);
        let label = &d.label;

        if label.is_subject() {
            if !self.is_predicate(ai) || !self.noun_like(b) {
                return;
            }
            if self.basic(b) {
                self.attribute(bi, self.prov(d, 2), None, true, None);
            } else {
                self.entity(bi, self.prov(d, 1));
            }
        } else if label.is_object() {
            if !a.is_verb() || !self.noun_like(b) {
                return;
            }
            let prev = self.s.prev_dep(d);
            let prev_mod = prev
                .map(|p| p.label.is("amod") || p.label.is("advmod"))
                .unwrap_or(false);
            let input_verb = self.lex.attribute_verbs.contains(&a.lemma);
            let basic = self.basic(b);
            if !basic && !prev_mod && !input_verb {
                self.entity(bi, self.prov(d, 3));
            } else if basic || input_verb {
                let adjective = prev.filter(|p| {
                    prev_mod
                        && p.governor == bi
                        && self
                            .tok(p.dependent)
                            .map(|t| t.is_adjective())
                            .unwrap_or(false)
                });
                match adjective {
                    Some(p) => self.attribute(bi, self.prov(d, 5), Some(p.dependent), true, None),
                    None => self.attribute(bi, self.prov(d, 4), None, true, None),
                }
            }
        } else if label.is_nmod("of") {
            if !self.noun_like(a) || !self.noun_like(b) {
                return;
            }
            let p = self.prov(d, 6);
            match (self.basic(a), self.basic(b)) {
                (true, false) => {
                    self.entity_from(bi, p, Some(ai));
                    self.attribute(ai, p, None, false, Some(bi));
                }
                (false, false) => {
                    self.entity(ai, p);
                    self.entity(bi, p);
                }
                (true, true) => {
                    let (Some(left), Some(right)) =
                        (self.name(&self.chain(ai)), self.name(&self.chain(bi)))
                    else {
                        return;
                    };
                    self.push_attribute(ai, format!("{left} of {right}"), p, None);
                }
                (false, true) => {}
            }
        } else if label.is_nmod("in") {
            if self.noun_like(a) && self.noun_like(b) {
                let p = self.prov(d, 7);
                self.entity(bi, p);
                self.attribute(ai, p, None, false, Some(bi));
            }
        } else if ["to", "for", "from", "as"].iter().any(|p| label.is_nmod(p)) {
            if self.noun_like(b) && !self.basic(b) {
                self.entity(bi, self.prov(d, 8));
            }
        } else if ["by", "agent", "with"].iter().any(|p| label.is_nmod(p)) {
            if !self.noun_like(b) {
                return;
            }
            if self.basic(b) {
                self.attribute(bi, self.prov(d, 9), None, false, None);
            } else {
                self.entity(bi, self.prov(d, 9));
            }
        } else if label.is_nmod("poss") {
            if !self.noun_like(a) {
                return;
            }
            let p = self.prov(d, 10);
            if self.noun_like(b) {
                self.entity(bi, p);
                self.attribute(ai, p, None, false, Some(bi));
            } else if b.is_pronoun() {
                self.attribute(ai, p, None, false, None);
            }
        } else if label.is("amod") {
            if !self.noun_like(a) || !b.is_adjective() {
                return;
            }
            let p = self.prov(d, 11);
            if self.basic(a) {
                self.attribute(ai, p, Some(bi), false, None);
            } else {
                self.entity(ai, p);
            }
        } else if label.is("compound") && label.subtype.is_none() {
            let before_argument = self
                .s
                .next_dep(d)
                .map(|n| n.label.is_subject() || n.label.is_object())
                .unwrap_or(false);
            if before_argument || !self.noun_like(a) || !self.noun_like(b) {
                return;
            }
            let p = self.prov(d, 12);
            match (self.basic(a), self.basic(b)) {
                (true, false) => {
                    if self.lex.is_generic(&self.word(a)) {
                        self.attribute(ai, p, None, false, None);
                    } else {
                        self.attribute(ai, p, None, false, Some(bi));
                        self.entity_from(bi, p, Some(ai));
                    }
                }
                (false, true) => {
                    let (lo, hi) = (ai.min(bi), ai.max(bi));
                    if let Some(name) = self.name(&[lo, hi]) {
                        self.push_attribute(ai, name, p, Some(ai));
                    }
                    self.entity(ai, p);
                }
                (true, true) => self.attribute(ai, p, None, false, None),
                (false, false) => self.entity(ai, p),
            }
        } else if label.is("conj") && matches!(label.subtype.as_deref(), Some("and") | Some("or")) {
            if !self.noun_like(a) || !self.noun_like(b) {
                return;
            }
            let p = self.prov(d, 13);
            match (self.basic(a), self.basic(b)) {
                (true, true) => {
                    self.attribute(ai, p, None, false, None);
                    self.attribute(bi, p, None, false, None);
                }
                (false, false) => {
                    self.entity(ai, p);
                    self.entity(bi, p);
                }
                _ => {}
            }
        }
    }
}

/// Dependencies that attach function words; they never count towards an
/// entity's frequency.
const FUNCTION_LABELS: &[&str] = &[
    "det", "case", "punct", "cc", "mark", "aux", "auxpass", "cop",
];

fn is_function_label(d: &TypedDependency) -> bool {
    FUNCTION_LABELS.iter().any(|l| d.label.is(l))
}

/// Runs rules 1 to 13 over every sentence and folds the matches.
pub fn extract_entities_attributes(doc: &ParsedDocument, lex: &Lexicon) -> Extraction {
    let mut per_sentence: Vec<Vec<Mention>> = Vec::with_capacity(doc.sentences.len());
    for s in &doc.sentences {
        let mut scan = Scan {
            s,
            lex,
            mentions: Vec::new(),
        };
        for d in &s.deps {
            scan.apply(d);
        }
        per_sentence.push(scan.mentions);
    }

    // Within a sentence, a name read as an entity is never also an attribute.
    for mentions in per_sentence.iter_mut() {
        let entity_names: BTreeSet<String> = mentions
            .iter()
            .filter(|m| m.kind == Kind::Entity)
            .map(|m| m.name.clone())
            .collect();
        for m in mentions.iter_mut() {
            if m.kind == Kind::Attribute && entity_names.contains(&m.name) {
                m.kind = Kind::Entity;
                m.owner_hint = None;
            }
        }
    }

    // Several rules may read the same token as an attribute; they all take
    // the most complete name and the first owner a rule paired with it.
    for mentions in per_sentence.iter_mut() {
        let mut best: BTreeMap<usize, (String, Option<usize>)> = BTreeMap::new();
        for m in mentions.iter().filter(|m| m.kind == Kind::Attribute) {
            let entry = best
                .entry(m.token)
                .or_insert_with(|| (m.name.clone(), m.owner_hint));
            if m.name.split(' ').count() > entry.0.split(' ').count() {
                entry.0 = m.name.clone();
            }
            if entry.1.is_none() {
                entry.1 = m.owner_hint;
            }
        }
        for m in mentions.iter_mut().filter(|m| m.kind == Kind::Attribute) {
            let (name, hint) = &best[&m.token];
            m.name = name.clone();
            m.owner_hint = *hint;
        }
    }

    let mut provenance: BTreeMap<String, Vec<Provenance>> = BTreeMap::new();
    let mut roles = Vec::with_capacity(doc.sentences.len());
    let mut attribute_mentions = Vec::new();
    for (pos, (s, mentions)) in doc.sentences.iter().zip(&per_sentence).enumerate() {
        let mut r = SentenceRoles {
            seq: s.seq,
            ..Default::default()
        };
        // An entity is counted once per content dependency touching the
        // words it was read from in this sentence.
        let mut touched: BTreeMap<&str, (u8, BTreeSet<usize>)> = BTreeMap::new();
        for m in mentions.iter().filter(|m| m.kind == Kind::Entity) {
            let entry = touched
                .entry(m.name.as_str())
                .or_insert_with(|| (m.prov.rule, BTreeSet::new()));
            if m.counted {
                entry.1.extend(m.tokens.iter().copied());
            }
        }
        for (name, (rule, tokens)) in touched {
            let list = provenance.entry(name.to_string()).or_default();
            for d in s.deps.iter().filter(|d| !is_function_label(d)) {
                if tokens.contains(&d.governor) || tokens.contains(&d.dependent) {
                    list.push(Provenance {
                        seq: s.seq,
                        ordinal: d.ordinal,
                        rule,
                    });
                }
            }
        }
        for m in mentions.iter().filter(|m| m.kind == Kind::Entity) {
            r.entities.insert(m.token, m.name.clone());
            if let Some(head) = m.modifier_of {
                r.stands_for.entry(head).or_insert_with(|| m.name.clone());
            }
        }
        for m in mentions.iter().filter(|m| m.kind == Kind::Attribute) {
            if r.entities.contains_key(&m.token) {
                continue;
            }
            r.attributes
                .entry(m.token)
                .or_insert_with(|| m.name.clone());
            attribute_mentions.push(AttributeMention {
                pos,
                token: m.token,
                name: m.name.clone(),
                prov: m.prov,
                owner_hint: m.owner_hint,
            });
        }
        roles.push(r);
    }

    let mut diagnostics = Vec::new();
    let mut entities = Vec::new();
    for (name, prov) in provenance {
        if prov.is_empty() {
            diagnostics.push(Diagnostic::new(
                None,
                format!("`{name}` only occurs as a resolved pronoun; not an entity"),
            ));
            continue;
        }
        entities.push(Entity {
            frequency: prov.len(),
            name,
            provenance: prov,
        });
    }
    let known: BTreeSet<&str> = entities.iter().map(|e| e.name.as_str()).collect();
    for r in roles.iter_mut() {
        r.stands_for.retain(|_, n| known.contains(n.as_str()));
    }

    let mut extraction = Extraction {
        entities,
        attributes: Vec::new(),
        roles,
        diagnostics,
        attribute_mentions,
    };
    extraction.attributes = fold_attributes(&extraction, |_| None);
    extraction
}

fn fold_attributes(
    ex: &Extraction,
    owner: impl Fn(&AttributeMention) -> Option<String>,
) -> Vec<Attribute> {
    let mut folded: BTreeMap<(Option<String>, String), Vec<Provenance>> = BTreeMap::new();
    for m in &ex.attribute_mentions {
        folded
            .entry((owner(m), m.name.clone()))
            .or_default()
            .push(m.prov);
    }
    folded
        .into_iter()
        .map(|((owner, name), provenance)| Attribute {
            name,
            owner,
            provenance,
        })
        .collect()
}

/// Fills attribute owners: the entity paired by the matching rule, else the
/// nearest entity in the sentence, else none.
pub fn attach_attributes(ex: &Extraction, doc: &ParsedDocument) -> Vec<Attribute> {
    let known = ex.entity_names();
    fold_attributes(ex, |m| {
        let roles = &ex.roles[m.pos];
        let valid = |name: &String| known.contains(name.as_str()) && *name != m.name;
        if let Some(name) = m.owner_hint.and_then(|h| roles.entities.get(&h)) {
            if valid(name) {
                return Some(name.clone());
            }
        }
        let _ = &doc.sentences[m.pos];
        roles
            .entities
            .iter()
            .filter(|(t, n)| **t != m.token && valid(n))
            .min_by_key(|(t, _)| (t.abs_diff(m.token), **t))
            .map(|(_, n)| n.clone())
    })
}
