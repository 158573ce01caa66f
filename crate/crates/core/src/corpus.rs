//! Raw requirement documents: format detection, use-case sentence
//! sequencing, and the shuffle/merge utilities used for robustness runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::depgraph::{DocFormat, FlowTag, ParsedDocument};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    pub source_id: String,
    pub lines: Vec<String>,
    pub declared_format: Option<DocFormat>,
}

impl RawDocument {
    pub fn from_text(source_id: &str, text: &str) -> Self {
        RawDocument {
            source_id: source_id.to_string(),
            lines: text.lines().map(str::to_string).collect(),
            declared_format: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("document");
        Ok(RawDocument::from_text(id, &text))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Main,
    Alternate,
    Extension,
    Exception,
    Precondition,
    Postcondition,
    Meta,
}

impl SectionKind {
    fn is_flow(self) -> bool {
        matches!(
            self,
            SectionKind::Main
                | SectionKind::Alternate
                | SectionKind::Extension
                | SectionKind::Exception
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcsStep {
    pub label: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UcsSection {
    pub kind: SectionKind,
    pub steps: Vec<UcsStep>,
}

/// Heading synonyms and reference syntax for sectioned documents.
#[derive(Debug, Clone)]
pub struct UcsConfig {
    pub headings: Vec<(SectionKind, String)>,
    /// Trailing in-sentence references to alternate steps, e.g. `(see 2a)`.
    /// The first non-empty capture group is the referenced label.
    pub trailing_reference: Regex,
}

impl Default for UcsConfig {
    fn default() -> Self {
        use SectionKind::*;
        let table: &[(SectionKind, &[&str])] = &[
            (
                Main,
                &[
                    "main success scenario",
                    "main flow of events",
                    "main flow",
                    "basic flow",
                    "main scenario",
                    "normal flow",
                    "basic course of events",
                ],
            ),
            (
                Alternate,
                &[
                    "alternate flows",
                    "alternate flow",
                    "alternative flows",
                    "alternative flow",
                    "alternate",
                    "alternatives",
                    "alternative",
                ],
            ),
            (Extension, &["extensions", "extension"]),
            (
                Exception,
                &[
                    "exceptions",
                    "exception flow",
                    "exceptional flow",
                    "exception",
                ],
            ),
            (
                Precondition,
                &[
                    "pre-conditions",
                    "pre-condition",
                    "preconditions",
                    "precondition",
                ],
            ),
            (
                Postcondition,
                &[
                    "post-conditions",
                    "post-condition",
                    "postconditions",
                    "postcondition",
                    "success end condition",
                    "failed end condition",
                ],
            ),
            (
                Meta,
                &[
                    "usecaseid",
                    "use case name",
                    "use case id",
                    "goal in context",
                    "primary actor",
                    "secondary actor",
                    "trigger event",
                    "business rules",
                    "description",
                    "intention",
                    "scope",
                    "actors",
                    "actor",
                    "name",
                ],
            ),
        ];
        let mut headings: Vec<(SectionKind, String)> = table
            .iter()
            .flat_map(|(k, syns)| syns.iter().map(move |s| (*k, s.to_string())))
            .collect();
        // Longest first so "alternate flow" wins over "alternate".
        headings.sort_by_key(|h| std::cmp::Reverse(h.1.len()));
        UcsConfig {
            headings,
            trailing_reference: Regex::new(
                r"(?i)\s*(?:\(\s*(?:see\s+)?(\d+\.?[a-z](?:\.\d+)?)\s*\)|\[\s*(\d+\.?[a-z](?:\.\d+)?)\s*\])\s*\.?\s*$",
            )
            .expect("valid reference pattern"),
        }
    }
}

/// A heading match: section kind plus any text following it on the line.
fn match_heading(line: &str, config: &UcsConfig) -> Option<(SectionKind, String, bool)> {
    let lower = line.to_lowercase();
    for (kind, syn) in &config.headings {
        if let Some(rest) = lower.strip_prefix(syn.as_str()) {
            let next = rest.chars().next();
            let punctuated = matches!(next, None | Some(':') | Some('.'));
            let spaced = matches!(next, Some(c) if c.is_whitespace());
            if !(punctuated || spaced) {
                continue;
            }
            // Single-word headings must stand alone to count towards format
            // detection; "Alternate payment ..." is prose.
            let strong = punctuated || syn.contains(' ');
            let tail = line[syn.len()..]
                .trim_start_matches([':', '.'])
                .trim()
                .to_string();
            return Some((*kind, tail, strong));
        }
    }
    None
}

fn clean_line(line: &str) -> String {
    let t = line.trim();
    let t = t.trim_start_matches(['-', '*', '•']).trim();
    t.replace("**", "").trim().to_string()
}

fn step_pattern() -> Regex {
    Regex::new(r"^(\d+(?:\.?[A-Za-z])?(?:\.\d+)?)[.):]?\s+(\S.*)$").expect("valid step pattern")
}

fn story_pattern() -> Regex {
    Regex::new(r#"(?i)^[\W_]*as\s+an?\s+[^,]+,\s*i\b"#).expect("valid story pattern")
}

pub fn detect_format(doc: &RawDocument) -> Result<DocFormat> {
    detect_format_with(doc, &UcsConfig::default())
}

pub fn detect_format_with(doc: &RawDocument, config: &UcsConfig) -> Result<DocFormat> {
    let lines: Vec<String> = doc
        .lines
        .iter()
        .map(|l| clean_line(l))
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let stories = story_pattern();
    let story_lines = lines.iter().filter(|l| stories.is_match(l)).count();
    if story_lines * 2 >= lines.len() {
        return Ok(DocFormat::Stories);
    }
    let has_flow_heading = lines
        .iter()
        .any(|l| matches!(match_heading(l, config), Some((k, _, true)) if k.is_flow()));
    if has_flow_heading {
        return Ok(DocFormat::Ucs);
    }
    Ok(DocFormat::General)
}

/// Splits a sectioned document into its sections and steps.
pub fn parse_sections(doc: &RawDocument, config: &UcsConfig) -> Vec<UcsSection> {
    let steps = step_pattern();
    let mut sections: Vec<UcsSection> = vec![UcsSection {
        kind: SectionKind::Meta,
        steps: Vec::new(),
    }];
    for raw in &doc.lines {
        let line = clean_line(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(c) = steps.captures(&line) {
            let label = c[1].to_lowercase();
            sections.last_mut().expect("non-empty").steps.push(UcsStep {
                label: Some(label),
                text: c[2].trim().to_string(),
            });
            continue;
        }
        if let Some((kind, tail, _)) = match_heading(&line, config) {
            let mut section = UcsSection {
                kind,
                steps: Vec::new(),
            };
            if !tail.is_empty() {
                section.steps.push(UcsStep {
                    label: None,
                    text: tail,
                });
            }
            sections.push(section);
            continue;
        }
        sections.last_mut().expect("non-empty").steps.push(UcsStep {
            label: None,
            text: line,
        });
    }
    sections.retain(|s| !s.steps.is_empty());
    sections
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequencedSentence {
    pub text: String,
    pub flow_tag: FlowTag,
    pub step_label: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sequenced {
    pub sentences: Vec<SequencedSentence>,
    pub warnings: Vec<String>,
}

/// Splits step text into sentences at `.`/`!`/`?` followed by whitespace
/// and an upper-case letter or quote.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            if j > i + 1
                && j < chars.len()
                && (chars[j].is_uppercase() || matches!(chars[j], '"' | '“'))
            {
                out.push(
                    chars[start..=i]
                        .iter()
                        .collect::<String>()
                        .trim()
                        .to_string(),
                );
                start = j;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    let tail: String = chars[start..].iter().collect::<String>().trim().to_string();
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}

fn anchor_of(label: &str) -> Option<u32> {
    let digits: String = label.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits.parse().ok()
}

fn label_key(label: &str) -> String {
    label.to_lowercase().replace('.', "")
}

struct Branch {
    anchor: Option<u32>,
    label: String,
    tag: FlowTag,
    text: String,
}

/// Orders a sectioned document: main-flow steps in order, each followed by
/// the alternate/extension/exception steps anchored to it.
pub fn sequence_sentences(doc: &RawDocument) -> Sequenced {
    sequence_sentences_with(doc, &UcsConfig::default())
}

pub fn sequence_sentences_with(doc: &RawDocument, config: &UcsConfig) -> Sequenced {
    let sections = parse_sections(doc, config);
    let mut main: Vec<(String, String)> = Vec::new();
    let mut branches: Vec<Branch> = Vec::new();
    let mut prose: Vec<String> = Vec::new();
    // Counts alternates per anchor to relabel bare numbers (1 → 1a).
    let mut per_anchor: BTreeMap<u32, u8> = BTreeMap::new();

    for section in &sections {
        for step in &section.steps {
            match (section.kind, &step.label) {
                (SectionKind::Main, Some(label)) => main.push((label.clone(), step.text.clone())),
                (
                    kind @ (SectionKind::Alternate
                    | SectionKind::Extension
                    | SectionKind::Exception),
                    Some(label),
                ) => {
                    let anchor = anchor_of(label);
                    let label = match anchor {
                        Some(n) if label.chars().all(|c| c.is_ascii_digit()) => {
                            let k = per_anchor.entry(n).or_insert(0);
                            let letter = (b'a' + *k) as char;
                            *k += 1;
                            format!("{n}{letter}")
                        }
                        _ => label.clone(),
                    };
                    let tag = if kind == SectionKind::Exception {
                        FlowTag::Exception
                    } else {
                        FlowTag::Alternate
                    };
                    branches.push(Branch {
                        anchor,
                        label,
                        tag,
                        text: step.text.clone(),
                    });
                }
                _ => prose.push(step.text.clone()),
            }
        }
    }

    let mut out = Sequenced::default();
    let mut placed = vec![false; branches.len()];
    let emit = |out: &mut Sequenced, text: &str, tag: FlowTag, label: Option<&str>| {
        for s in split_sentences(text) {
            out.sentences.push(SequencedSentence {
                text: s,
                flow_tag: tag,
                step_label: label.map(str::to_string),
            });
        }
    };

    for (label, text) in &main {
        let mut text = text.clone();
        let mut referenced: Vec<String> = Vec::new();
        while let Some(c) = config.trailing_reference.captures(&text) {
            let r = c
                .iter()
                .skip(1)
                .flatten()
                .next()
                .map(|m| m.as_str().to_string())
                .unwrap_or_default();
            referenced.push(label_key(&r));
            let cut = c.get(0).expect("whole match").start();
            text.truncate(cut);
            if !text.ends_with('.') {
                text.push('.');
            }
        }
        emit(&mut out, &text, FlowTag::Main, Some(label));
        let anchor = anchor_of(label);
        for (i, b) in branches.iter().enumerate() {
            if placed[i] {
                continue;
            }
            let by_reference = referenced
                .iter()
                .any(|r| label_key(&b.label).starts_with(r.as_str()));
            let by_number = referenced.is_empty() && b.anchor.is_some() && b.anchor == anchor;
            if by_reference || by_number {
                placed[i] = true;
                emit(&mut out, &b.text, b.tag, Some(&b.label));
            }
        }
    }
    for (i, b) in branches.iter().enumerate() {
        if !placed[i] {
            out.warnings.push(format!(
                "step {} refers to no main-flow step; appended at the end",
                b.label
            ));
            emit(&mut out, &b.text, b.tag, Some(&b.label));
        }
    }
    for p in &prose {
        emit(&mut out, p, FlowTag::None, None);
    }
    out
}

/// Deterministic permutation of sentences; `seq` is renumbered.
pub fn shuffle(doc: &ParsedDocument, seed: u64) -> ParsedDocument {
    let mut out = doc.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.sentences.shuffle(&mut rng);
    out.renumber();
    out
}

/// Concatenates documents in argument order; each sentence records the
/// document it came from.
pub fn merge(docs: &[ParsedDocument]) -> Result<ParsedDocument> {
    let first = docs.first().ok_or(Error::EmptyDocument)?;
    let format = if docs.iter().all(|d| d.format == first.format) {
        first.format
    } else {
        DocFormat::General
    };
    let id = docs
        .iter()
        .map(|d| d.source_id.as_str())
        .collect::<Vec<_>>()
        .join("+");
    let mut out = ParsedDocument::new(&id, format);
    for d in docs {
        for s in &d.sentences {
            let mut s = s.clone();
            if s.source.is_none() {
                s.source = Some(d.source_id.clone());
            }
            out.sentences.push(s);
        }
    }
    out.renumber();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEMPLATE_2: &str = "UseCaseID: Cancel Reservation
Goal In Context: A customer wishes to cancel a reservation.
Pre-Condition: A reservation has already been made.
Main Success Scenario:
1. Customer selects the \"Cancel Reservation\" option.
2. System displays a screen with an input field for a reservation number.
3. Customer enters a reservation number and clicks the \"Submit\" button.
4. If reservation number is valid the system will display the details of the reservation.
Extensions:
- 2.a. Customer selects the \"Cancel\" option.
 - 2.a.1. System displays the main options screen.
- 3.a. Customer selects the \"Cancel\" option.
 - 3.a.1. System displays the main options screen.
Business Rules:
B1: Refund policy in-case of advance payment
";

    #[test]
    fn template_two_is_ucs() {
        let doc = RawDocument::from_text("t2", TEMPLATE_2);
        assert_eq!(detect_format(&doc).unwrap(), DocFormat::Ucs);
    }

    #[test]
    fn extension_follows_its_anchor() {
        let doc = RawDocument::from_text("t2", TEMPLATE_2);
        let seq = sequence_sentences(&doc);
        let labels: Vec<_> = seq
            .sentences
            .iter()
            .map(|s| s.step_label.clone().unwrap_or_default())
            .collect();
        let pos = |l: &str| labels.iter().position(|x| x == l).unwrap();
        assert_eq!(pos("2.a"), pos("2") + 1);
        assert_eq!(pos("2.a.1"), pos("2") + 2);
        assert_eq!(pos("3"), pos("2.a.1") + 1);
        assert_eq!(seq.sentences[pos("2.a.1")].flow_tag, FlowTag::Alternate);
        assert!(seq.warnings.is_empty());
    }

    #[test]
    fn empty_extensions_keep_main_order() {
        let doc = RawDocument::from_text(
            "x",
            "Main Flow:\n1. User logs in.\n2. System shows menu.\nExtensions:\n",
        );
        let seq = sequence_sentences(&doc);
        let texts: Vec<_> = seq.sentences.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, ["User logs in.", "System shows menu."]);
    }

    #[test]
    fn dangling_alternate_goes_last_with_warning() {
        let doc = RawDocument::from_text(
            "x",
            "Main Flow:\n1. User logs in.\nAlternate:\n7a. User leaves.\n",
        );
        let seq = sequence_sentences(&doc);
        assert_eq!(seq.sentences.last().unwrap().text, "User leaves.");
        assert_eq!(seq.warnings.len(), 1);
    }

    #[test]
    fn trailing_reference_places_branch() {
        let doc = RawDocument::from_text(
            "x",
            "Main Flow:\n1. User logs in (see 2a).\n2. System shows menu.\nAlternate Flow:\n2a. Login fails.\n",
        );
        let seq = sequence_sentences(&doc);
        let texts: Vec<_> = seq.sentences.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(
            texts,
            ["User logs in.", "Login fails.", "System shows menu."]
        );
    }

    #[test]
    fn exceptions_are_tagged() {
        let doc = RawDocument::from_text(
            "x",
            "Basic Flow:\n1. User pays.\nExceptions:\n1a. Payment fails.\n",
        );
        let seq = sequence_sentences(&doc);
        assert_eq!(seq.sentences[1].flow_tag, FlowTag::Exception);
    }

    #[test]
    fn splits_two_sentence_steps() {
        assert_eq!(
            split_sentences("The call is disconnected. The base use case terminates."),
            ["The call is disconnected.", "The base use case terminates."]
        );
        assert_eq!(split_sentences("One only."), ["One only."]);
    }

    #[test]
    fn empty_document_is_an_error() {
        let doc = RawDocument::from_text("x", "\n  \n");
        assert!(matches!(detect_format(&doc), Err(Error::EmptyDocument)));
    }

    #[test]
    fn prose_is_general() {
        let doc = RawDocument::from_text(
            "lib",
            "A library issue loan items to customers.\nEach customer is known as a member.",
        );
        assert_eq!(detect_format(&doc).unwrap(), DocFormat::General);
    }
}
