//! Input/output categorization of attributes (rules 27 to 31).
//!
//! A verb is triggered by its first argument dependency. From there the
//! sentence is scanned forward and every attribute the verb governs, directly
//! or through a conjunction, takes the verb's role. Passive clauses with a
//! `by`/`with` agent look backwards instead, at the attributes already seen
//! on that verb.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::depgraph::{ParsedDocument, ParsedSentence, TypedDependency};
use crate::er::{ErOutput, Provenance, SentenceRoles};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Input => "input",
            Role::Output => "output",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataRole {
    pub attribute: String,
    pub role: Role,
    pub operation: String,
    pub provenance: Provenance,
}

/// How verbs such as "get" or "send" are read when the subject is the
/// system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tdr29Mode {
    /// The system receiving data makes it an input.
    #[default]
    Prose,
    /// The system as subject makes the data an output.
    Pseudocode,
}

impl FromStr for Tdr29Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "prose" => Ok(Tdr29Mode::Prose),
            "pseudocode" => Ok(Tdr29Mode::Pseudocode),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

fn is_trigger(d: &TypedDependency) -> bool {
    let l = &d.label;
    l.is_subject() || l.is_object() || l.is("mark") || l.is_nmod("to")
}

fn is_sibling(d: &TypedDependency) -> bool {
    d.label.is("conj") || d.label.is("appos")
}

fn is_agent(d: &TypedDependency) -> bool {
    ["by", "agent", "with"].iter().any(|p| d.label.is_nmod(p))
}

/// The role a verb gives its data, with the rule number that decides it.
fn verb_role(
    s: &ParsedSentence,
    verb: usize,
    roles: &SentenceRoles,
    lex: &Lexicon,
    mode: Tdr29Mode,
) -> Option<(Role, u8)> {
    let lemma = s.token(verb)?.lemma.as_str();
    if lex.input_verbs.contains(lemma) {
        return Some((Role::Input, 27));
    }
    if lex.output_verbs.contains(lemma) {
        return Some((Role::Output, 28));
    }
    if lex.ambiguous_verbs.contains(lemma) {
        let system_subject = s
            .children(verb)
            .filter(|d| d.label.is_subject())
            .filter_map(|d| s.token(d.dependent))
            .any(|t| lex.is_system(&t.lemma));
        let external_subject = !system_subject
            && s.children(verb)
                .any(|d| d.label.is("nsubj") && roles.entity_of(d.dependent).is_some());
        let role = match (mode, system_subject, external_subject) {
            (Tdr29Mode::Prose, true, _) => Role::Input,
            (Tdr29Mode::Prose, false, true) => Role::Output,
            (Tdr29Mode::Pseudocode, true, _) => Role::Output,
            (Tdr29Mode::Pseudocode, false, true) => Role::Input,
            _ => return None,
        };
        return Some((role, 29));
    }
    None
}

/// Attribute tokens reached from `verb` through the dependencies in
/// `window`: direct dependents of the verb other than its active subject,
/// plus conjuncts and appositions of tokens already reached.
pub(crate) fn reachable(
    s: &ParsedSentence,
    verb: usize,
    window: &[TypedDependency],
    roles: &SentenceRoles,
) -> Vec<usize> {
    let mut reached: BTreeSet<usize> = BTreeSet::new();
    let mut out = Vec::new();
    for d in window {
        let hit = if d.governor == verb {
            !d.label.is("nsubj")
        } else {
            is_sibling(d) && reached.contains(&d.governor)
        };
        if hit {
            reached.insert(d.dependent);
            if roles.attributes.contains_key(&d.dependent) {
                out.push(d.dependent);
            }
        }
    }
    // Conjuncts attached ahead of the verb's own dependency still belong to it.
    for d in &s.deps {
        if is_sibling(d) && reached.contains(&d.governor) && !reached.contains(&d.dependent) {
            reached.insert(d.dependent);
            if roles.attributes.contains_key(&d.dependent) {
                out.push(d.dependent);
            }
        }
    }
    out
}

pub fn categorize_attributes(
    doc: &ParsedDocument,
    er: &ErOutput,
    lex: &Lexicon,
    mode: Tdr29Mode,
) -> Vec<DataRole> {
    let known: BTreeSet<&str> = er
        .model
        .attributes
        .iter()
        .map(|a| a.name.as_str())
        .collect();
    let mut out: Vec<DataRole> = Vec::new();
    let mut push = |attribute: &str, role: Role, operation: &str, provenance: Provenance| {
        if !known.contains(attribute) {
            return;
        }
        if out
            .iter()
            .any(|r| r.attribute == attribute && r.role == role && r.operation == operation)
        {
            return;
        }
        out.push(DataRole {
            attribute: attribute.to_string(),
            role,
            operation: operation.to_string(),
            provenance,
        });
    };
    for (s, roles) in doc.sentences.iter().zip(&er.extraction.roles) {
        let mut done = BTreeSet::new();
        for (i, d) in s.deps.iter().enumerate() {
            let verb = d.governor;
            let Some(v) = s.token(verb).filter(|t| t.is_verb()) else {
                continue;
            };
            if is_trigger(d) && done.insert(verb) {
                let Some((role, rule)) = verb_role(s, verb, roles, lex, mode) else {
                    continue;
                };
                for t in reachable(s, verb, &s.deps[i..], roles) {
                    let prov = Provenance {
                        seq: s.seq,
                        ordinal: d.ordinal,
                        rule,
                    };
                    push(&roles.attributes[&t], role, &v.lemma, prov);
                }
            } else if is_agent(d) {
                let role = if lex.input_verbs.contains(&v.lemma) {
                    (Role::Input, 30)
                } else if lex.output_verbs.contains(&v.lemma) {
                    (Role::Output, 31)
                } else {
                    continue;
                };
                for t in reachable(s, verb, &s.deps[..i], roles) {
                    let prov = Provenance {
                        seq: s.seq,
                        ordinal: d.ordinal,
                        rule: role.1,
                    };
                    push(&roles.attributes[&t], role.0, &v.lemma, prov);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.attribute, a.role, &a.operation).cmp(&(&b.attribute, b.role, &b.operation))
    });
    out
}
