//! Relationships between extracted entities (rules 14 to 23) plus the
//! cross-sentence data-flow relationships.

use std::collections::{BTreeMap, BTreeSet};

use super::{Diagnostic, Extraction, Provenance, RelKey, RelOrigin, Relationship, SentenceRoles};
use crate::depgraph::{ParsedDocument, ParsedSentence, TypedDependency};
use crate::lexicon::Lexicon;

/// One sentence-level occurrence of a relationship, kept so cardinalities
/// can be read off the tokens at each end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipInstance {
    pub key: RelKey,
    /// Position of the sentence in the document.
    pub pos: usize,
    pub subject_token: usize,
    pub object_token: usize,
    pub origin: RelOrigin,
}

#[derive(Debug, Clone, Default)]
pub struct Relationships {
    pub relationships: Vec<Relationship>,
    pub instances: Vec<RelationshipInstance>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Arguments of one verb gathered from the sentence's dependencies.
#[derive(Default)]
struct Frame<'a> {
    subj: Vec<&'a TypedDependency>,
    subjpass: Vec<&'a TypedDependency>,
    dobj: Vec<&'a TypedDependency>,
    agent: Vec<&'a TypedDependency>,
    preps: Vec<(&'static str, &'a TypedDependency)>,
    as_: Vec<&'a TypedDependency>,
}

struct Builder<'a> {
    known: BTreeSet<&'a str>,
    merged: BTreeMap<RelKey, Relationship>,
    instances: Vec<RelationshipInstance>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> Builder<'a> {
    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        roles: &SentenceRoles,
        pos: usize,
        subject_token: usize,
        verb_phrase: String,
        object_token: usize,
        origin: RelOrigin,
        prov: Provenance,
    ) {
        let (Some(subject), Some(object)) = (
            roles.entity_of(subject_token),
            roles.entity_of(object_token),
        ) else {
            return;
        };
        self.add_named(
            subject.to_string(),
            verb_phrase,
            object.to_string(),
            origin,
            prov,
            Some((pos, subject_token, object_token)),
        );
    }

    fn add_named(
        &mut self,
        subject: String,
        verb_phrase: String,
        object: String,
        origin: RelOrigin,
        prov: Provenance,
        at: Option<(usize, usize, usize)>,
    ) {
        if subject == object {
            return;
        }
        if !self.known.contains(subject.as_str()) || !self.known.contains(object.as_str()) {
            self.diagnostics.push(Diagnostic::new(
                Some(prov.seq),
                format!("relationship `{subject} ({verb_phrase}) {object}` names a non-entity; discarded"),
            ));
            return;
        }
        let key = RelKey {
            subject,
            verb_phrase,
            object,
        };
        if let Some((pos, s, o)) = at {
            self.instances.push(RelationshipInstance {
                key: key.clone(),
                pos,
                subject_token: s,
                object_token: o,
                origin,
            });
        }
        let entry = self
            .merged
            .entry(key.clone())
            .or_insert_with(|| Relationship {
                subject: key.subject.clone(),
                verb_phrase: key.verb_phrase.clone(),
                object: key.object.clone(),
                origin,
                provenance: Vec::new(),
            });
        // Sentence-local origins outrank data flow; a weaker origin never
        // contributes provenance to a stronger one.
        if origin < entry.origin {
            entry.origin = origin;
            entry.provenance.clear();
        }
        if origin == entry.origin && !entry.provenance.contains(&prov) {
            entry.provenance.push(prov);
        }
    }
}

/// Verb lemma plus any particle ("log in").
fn verb_phrase(s: &ParsedSentence, verb: usize) -> Option<String> {
    let t = s.token(verb)?;
    let mut phrase = t.lemma.clone();
    for d in s.children(verb) {
        if d.label.is("compound") && d.label.subtype.as_deref() == Some("prt") {
            if let Some(p) = s.token(d.dependent) {
                phrase.push(' ');
                phrase.push_str(&p.lemma);
            }
        }
    }
    Some(phrase)
}

fn frames(s: &ParsedSentence) -> BTreeMap<usize, Frame<'_>> {
    let mut out: BTreeMap<usize, Frame<'_>> = BTreeMap::new();
    for d in &s.deps {
        let verb = match s.token(d.governor) {
            Some(t) if t.is_verb() => d.governor,
            _ => continue,
        };
        let f = out.entry(verb).or_default();
        let l = &d.label;
        if l.is("nsubj") {
            f.subj.push(d);
        } else if l.is("nsubjpass") {
            f.subjpass.push(d);
        } else if l.is("dobj") {
            f.dobj.push(d);
        } else if l.is_nmod("agent") || l.is_nmod("by") {
            f.agent.push(d);
        } else if l.is_nmod("as") {
            f.as_.push(d);
        } else {
            for p in ["to", "in", "for", "from"] {
                if l.is_nmod(p) {
                    f.preps.push((p, d));
                }
            }
        }
    }
    out
}

fn sentence_relationships(
    b: &mut Builder<'_>,
    s: &ParsedSentence,
    pos: usize,
    roles: &SentenceRoles,
) {
    let prov = |d: &TypedDependency, rule: u8| Provenance {
        seq: s.seq,
        ordinal: d.ordinal,
        rule,
    };
    let frames = frames(s);
    let is_entity = |t: usize| roles.entity_of(t).is_some();

    for (&verb, f) in &frames {
        let Some(vp) = verb_phrase(s, verb) else {
            continue;
        };
        let with = |p: &str| format!("{vp} {p}");
        for sj in f.subj.iter().filter(|d| is_entity(d.dependent)) {
            for ob in f.dobj.iter().filter(|d| is_entity(d.dependent)) {
                let p = prov(ob, 14);
                b.add(
                    roles,
                    pos,
                    sj.dependent,
                    vp.clone(),
                    ob.dependent,
                    RelOrigin::Direct,
                    p,
                );
                for of in s.children(ob.dependent).filter(|d| d.label.is_nmod("of")) {
                    if is_entity(of.dependent) {
                        let p = prov(of, 17);
                        b.add(
                            roles,
                            pos,
                            sj.dependent,
                            vp.clone(),
                            ob.dependent,
                            RelOrigin::Direct,
                            p,
                        );
                        b.add(
                            roles,
                            pos,
                            ob.dependent,
                            "has".into(),
                            of.dependent,
                            RelOrigin::Direct,
                            p,
                        );
                    }
                }
                for (prep, to) in f
                    .preps
                    .iter()
                    .filter(|(p, d)| *p == "to" && is_entity(d.dependent))
                {
                    let p = prov(to, 18);
                    b.add(
                        roles,
                        pos,
                        sj.dependent,
                        vp.clone(),
                        ob.dependent,
                        RelOrigin::Direct,
                        p,
                    );
                    b.add(
                        roles,
                        pos,
                        ob.dependent,
                        with(prep),
                        to.dependent,
                        RelOrigin::Preposition,
                        p,
                    );
                    b.add(
                        roles,
                        pos,
                        sj.dependent,
                        with(prep),
                        to.dependent,
                        RelOrigin::Preposition,
                        p,
                    );
                }
            }
            for (prep, pd) in f.preps.iter().filter(|(p, _)| *p != "to") {
                if is_entity(pd.dependent) {
                    let rule = if *prep == "in" { 21 } else { 22 };
                    b.add(
                        roles,
                        pos,
                        sj.dependent,
                        with(prep),
                        pd.dependent,
                        RelOrigin::Preposition,
                        prov(pd, rule),
                    );
                }
            }
        }
        for sp in f.subjpass.iter().filter(|d| is_entity(d.dependent)) {
            for ag in f.agent.iter().filter(|d| is_entity(d.dependent)) {
                b.add(
                    roles,
                    pos,
                    sp.dependent,
                    vp.clone(),
                    ag.dependent,
                    RelOrigin::Direct,
                    prov(ag, 15),
                );
            }
            for (prep, to) in f
                .preps
                .iter()
                .filter(|(p, d)| *p == "to" && is_entity(d.dependent))
            {
                b.add(
                    roles,
                    pos,
                    sp.dependent,
                    with(prep),
                    to.dependent,
                    RelOrigin::Preposition,
                    prov(to, 19),
                );
                // A different verb's subject acting on the passive clause.
                for (&other, g) in frames.iter().filter(|(v, _)| **v != verb) {
                    let Some(ovp) = verb_phrase(s, other) else {
                        continue;
                    };
                    for sj in g.subj.iter().filter(|d| is_entity(d.dependent)) {
                        let p = prov(to, 20);
                        b.add(
                            roles,
                            pos,
                            sj.dependent,
                            ovp.clone(),
                            sp.dependent,
                            RelOrigin::Direct,
                            p,
                        );
                        b.add(
                            roles,
                            pos,
                            sj.dependent,
                            with(prep),
                            to.dependent,
                            RelOrigin::Preposition,
                            p,
                        );
                        b.add(
                            roles,
                            pos,
                            sp.dependent,
                            with(prep),
                            to.dependent,
                            RelOrigin::Preposition,
                            p,
                        );
                    }
                }
            }
        }
        for a in f.as_.iter().filter(|d| is_entity(d.dependent)) {
            for ob in f.dobj.iter().filter(|d| is_entity(d.dependent)) {
                b.add(
                    roles,
                    pos,
                    a.dependent,
                    vp.clone(),
                    ob.dependent,
                    RelOrigin::Direct,
                    prov(ob, 23),
                );
            }
        }
    }

    // "of" between two entities reads as possession; so do the other
    // relation-bearing prepositions when they hang off a noun rather than
    // a verb ("products from the shopping cart").
    let possessive = |d: &&TypedDependency| {
        d.label.is_nmod("of")
            || (["for", "from", "in"].iter().any(|p| d.label.is_nmod(p))
                && s.token(d.governor).map(|t| !t.is_verb()).unwrap_or(false))
    };
    for d in s.deps.iter().filter(possessive) {
        if is_entity(d.governor) && is_entity(d.dependent) {
            b.add(
                roles,
                pos,
                d.governor,
                "has".into(),
                d.dependent,
                RelOrigin::Direct,
                prov(d, 16),
            );
        }
    }
}

/// For an attribute token, the verb governing it and that verb's subject
/// entity.
fn acting_subject<'r>(
    s: &ParsedSentence,
    roles: &'r SentenceRoles,
    token: usize,
) -> Option<(&'r str, String, usize)> {
    let head = s
        .heads(token)
        .find(|d| s.token(d.governor).map(|t| t.is_verb()).unwrap_or(false))?;
    let verb = head.governor;
    let subject = s
        .children(verb)
        .filter(|d| d.label.is("nsubj"))
        .find_map(|d| roles.entity_of(d.dependent))?;
    Some((subject, verb_phrase(s, verb)?, head.ordinal))
}

fn dataflow(b: &mut Builder<'_>, doc: &ParsedDocument, roles: &[SentenceRoles]) {
    let present: Vec<BTreeSet<&str>> = roles
        .iter()
        .map(|r| {
            r.entities
                .values()
                .chain(r.stands_for.values())
                .map(String::as_str)
                .collect()
        })
        .collect();
    let co_occur = |a: &str, c: &str| present.iter().any(|p| p.contains(a) && p.contains(c));
    for (i, (s, r)) in doc.sentences.iter().zip(roles).enumerate() {
        for &token in r.attributes.keys() {
            let Some(lemma) = s.token(token).map(|t| t.lemma.as_str()) else {
                continue;
            };
            let Some((subject, verb, _)) = acting_subject(s, r, token) else {
                continue;
            };
            for (later, lr) in doc.sentences.iter().zip(roles).skip(i + 1) {
                for (&u, owner) in &lr.stands_for {
                    if later.token(u).map(|t| t.lemma.as_str()) != Some(lemma) {
                        continue;
                    }
                    if owner == subject || co_occur(subject, owner) {
                        continue;
                    }
                    let prov = Provenance {
                        seq: later.seq,
                        ordinal: later.heads(u).next().map(|d| d.ordinal).unwrap_or(0),
                        rule: 0,
                    };
                    b.add_named(
                        subject.to_string(),
                        verb.clone(),
                        owner.clone(),
                        RelOrigin::Dataflow,
                        prov,
                        None,
                    );
                }
            }
        }
    }
}

/// Runs rules 14 to 23 on every sentence, then the data-flow pass.
pub fn extract_relationships(
    doc: &ParsedDocument,
    ex: &Extraction,
    _lex: &Lexicon,
) -> Relationships {
    let mut b = Builder {
        known: ex.entity_names(),
        merged: BTreeMap::new(),
        instances: Vec::new(),
        diagnostics: Vec::new(),
    };
    for (pos, (s, roles)) in doc.sentences.iter().zip(&ex.roles).enumerate() {
        sentence_relationships(&mut b, s, pos, roles);
    }
    dataflow(&mut b, doc, &ex.roles);
    for r in b.merged.values_mut() {
        r.provenance.sort_unstable();
    }
    Relationships {
        relationships: b.merged.into_values().collect(),
        instances: b.instances,
        diagnostics: b.diagnostics,
    }
}
