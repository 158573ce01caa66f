//! Cardinalities and modality (rules 24 to 26) with the plural-tag
//! fallback.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    CardSource, CardValue, Cardinality, Diagnostic, EachMode, Extraction, RelKey, RelOrigin,
    Relationships,
};
use crate::depgraph::{ParsedDocument, ParsedSentence};
use crate::lexicon::Lexicon;

/// What the dependencies of one entity token say about its cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Reading {
    value: CardValue,
    modality: Option<u32>,
    source: CardSource,
    /// "each" under [`EachMode::One`]: the opposite end becomes `N`.
    each: bool,
}

const NUMBER_WORDS: &[&str] = &[
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve",
];

fn number(text: &str) -> Option<u32> {
    let t = text.to_lowercase();
    t.parse()
        .ok()
        .or_else(|| NUMBER_WORDS.iter().position(|w| *w == t).map(|i| i as u32))
}

/// Lower-cased words immediately before `index`, joined by spaces.
fn preceding(s: &ParsedSentence, index: usize, n: usize) -> String {
    let lo = index.saturating_sub(n).max(1);
    (lo..index)
        .filter_map(|i| s.token(i))
        .map(|t| t.surface.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

fn keyword(
    s: &ParsedSentence,
    token: usize,
    lex: &Lexicon,
    each_mode: EachMode,
    diags: &mut Vec<Diagnostic>,
) -> Option<Reading> {
    let keyword = |value, modality, each| Reading {
        value,
        modality,
        source: CardSource::Keyword,
        each,
    };
    for d in s.children(token) {
        let Some(b) = s.token(d.dependent) else {
            continue;
        };
        let word = b.lemma.as_str();
        if d.label.is("amod")
            && (lex.many_adjectives.contains(word) || lex.many_determiners.contains(word))
        {
            return Some(keyword(CardValue::Many, None, false));
        }
        if d.label.is("nummod") {
            let Some(k) = number(&b.surface) else {
                continue;
            };
            if k == 0 {
                diags.push(Diagnostic::new(
                    Some(s.seq),
                    format!(
                        "cardinality 0 on `{}` ignored",
                        s.token(token).map(|t| t.surface.as_str()).unwrap_or("")
                    ),
                ));
                continue;
            }
            let before = preceding(s, d.dependent, 3);
            let marked = |set: &BTreeSet<String>| set.iter().any(|m| before.ends_with(m.as_str()));
            if marked(&lex.min_markers) {
                return Some(keyword(CardValue::Many, Some(k), false));
            }
            return Some(keyword(CardValue::Exact(k).normalized(), None, false));
        }
        if d.label.is("det") {
            if word == "each" && each_mode == EachMode::One {
                return Some(keyword(CardValue::One, None, true));
            }
            if lex.many_determiners.contains(word) {
                return Some(keyword(CardValue::Many, None, false));
            }
            if lex.one_determiners.contains(word) {
                return Some(keyword(CardValue::One, None, false));
            }
        }
    }
    None
}

fn pos_reading(s: &ParsedSentence, token: usize) -> Reading {
    let plural = s.token(token).map(|t| t.is_plural_noun()).unwrap_or(false);
    Reading {
        value: if plural {
            CardValue::Many
        } else {
            CardValue::One
        },
        modality: None,
        source: CardSource::Pos,
        each: false,
    }
}

/// The token carrying the determiners of an end: an attribute head standing
/// for its modifier entity, or the entity token itself.
fn np_head(s: &ParsedSentence, token: usize) -> usize {
    s.heads(token)
        .find(|d| d.label.is("compound") && d.label.subtype.is_none())
        .map(|d| d.governor)
        .unwrap_or(token)
}

fn read(
    s: &ParsedSentence,
    token: usize,
    lex: &Lexicon,
    each_mode: EachMode,
    diags: &mut Vec<Diagnostic>,
) -> Reading {
    keyword(s, token, lex, each_mode, diags)
        .or_else(|| {
            let head = np_head(s, token);
            (head != token)
                .then(|| keyword(s, head, lex, each_mode, diags))
                .flatten()
        })
        .unwrap_or_else(|| pos_reading(s, token))
}

/// Folds a new reading into an end; keyword beats plural tag, conflicting
/// keywords keep the first, conflicting tags settle on `N`.
fn fold(
    slot: &mut Option<Reading>,
    new: Reading,
    what: &str,
    seq: usize,
    diags: &mut Vec<Diagnostic>,
) {
    match slot {
        None => *slot = Some(new),
        Some(old) => match (old.source, new.source) {
            (CardSource::Pos, CardSource::Keyword) => *slot = Some(new),
            (CardSource::Keyword, CardSource::Keyword)
                if (old.value, old.modality) != (new.value, new.modality) =>
            {
                diags.push(Diagnostic::new(
                    Some(seq),
                    format!(
                        "conflicting cardinalities for {what}: kept {}, ignored {}",
                        old.value, new.value
                    ),
                ));
            }
            (CardSource::Pos, CardSource::Pos) if new.value == CardValue::Many => {
                old.value = CardValue::Many
            }
            _ => {}
        },
    }
}

pub fn extract_cardinalities(
    doc: &ParsedDocument,
    ex: &Extraction,
    rels: &Relationships,
    lex: &Lexicon,
    each_mode: EachMode,
) -> (Vec<Cardinality>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let mut ends: BTreeMap<(RelKey, bool), Option<Reading>> = BTreeMap::new();
    let mut related: BTreeSet<&str> = BTreeSet::new();

    for inst in rels
        .instances
        .iter()
        .filter(|i| i.origin != RelOrigin::Dataflow)
    {
        let s = &doc.sentences[inst.pos];
        let subj = read(s, inst.subject_token, lex, each_mode, &mut diags);
        let obj = read(s, inst.object_token, lex, each_mode, &mut diags);
        let flip = |own: Reading, other: Reading| {
            if other.each && own.source == CardSource::Pos {
                Reading {
                    value: CardValue::Many,
                    modality: None,
                    source: CardSource::Keyword,
                    each: false,
                }
            } else {
                own
            }
        };
        let (subj, obj) = (flip(subj, obj), flip(obj, subj));
        for (is_subject, reading) in [(true, subj), (false, obj)] {
            let what = format!(
                "`{}` in `{}`",
                if is_subject {
                    &inst.key.subject
                } else {
                    &inst.key.object
                },
                inst.key
            );
            let slot = ends.entry((inst.key.clone(), is_subject)).or_default();
            fold(slot, reading, &what, s.seq, &mut diags);
        }
    }

    let mut out = Vec::new();
    for rel in &rels.relationships {
        for (is_subject, entity) in [(true, &rel.subject), (false, &rel.object)] {
            let Some(Some(r)) = ends.get(&(rel.key(), is_subject)) else {
                continue;
            };
            related.insert(entity.as_str());
            out.push(Cardinality {
                entity: entity.clone(),
                relationship: Some(rel.key()),
                value: r.value,
                modality: r.modality,
                source: r.source,
            });
        }
    }

    // Entities outside every sentence-level relationship carry their own
    // cardinality.
    let mut alone: BTreeMap<&str, Option<Reading>> = BTreeMap::new();
    for (s, roles) in doc.sentences.iter().zip(&ex.roles) {
        for (&token, name) in &roles.entities {
            if related.contains(name.as_str()) || ex.entities.iter().all(|e| &e.name != name) {
                continue;
            }
            let r = read(s, token, lex, each_mode, &mut diags);
            fold(
                alone.entry(name).or_default(),
                r,
                &format!("`{name}`"),
                s.seq,
                &mut diags,
            );
        }
    }
    for (name, r) in alone {
        let Some(r) = r else { continue };
        out.push(Cardinality {
            entity: name.to_string(),
            relationship: None,
            value: r.value,
            modality: r.modality,
            source: r.source,
        });
    }
    (out, diags)
}
