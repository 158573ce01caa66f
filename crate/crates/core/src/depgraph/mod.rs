//! Parsed-sentence data model and the dependency file formats.
//!
//! A [`ParsedDocument`] is an ordered list of [`ParsedSentence`]s, each
//! holding its tokens and the typed dependencies between them. Documents are
//! read from the native line format ([`load_native`]) or CoNLL-U
//! ([`load_conllu`]) and are immutable once built.

mod conllu;
mod labels;
mod native;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conllu::{load_conllu, parse_conllu};
pub use labels::{DependencyLabel, LabelNormalizer, CANONICAL_BASES};
pub use native::{load_native, parse_native, save_native, to_native_string};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    /// Penn Treebank tag.
    pub pos: String,
}

impl Token {
    pub fn new(index: usize, surface: &str, lemma: &str, pos: &str) -> Self {
        Token {
            index,
            surface: surface.to_string(),
            lemma: lemma.to_lowercase(),
            pos: pos.to_string(),
        }
    }

    pub fn is_noun(&self) -> bool {
        self.pos.starts_with("NN")
    }

    pub fn is_plural_noun(&self) -> bool {
        self.pos == "NNS" || self.pos == "NNPS"
    }

    pub fn is_verb(&self) -> bool {
        self.pos.starts_with("VB")
    }

    pub fn is_gerund(&self) -> bool {
        self.pos == "VBG"
    }

    pub fn is_adjective(&self) -> bool {
        self.pos.starts_with("JJ")
    }

    pub fn is_pronoun(&self) -> bool {
        self.pos == "PRP" || self.pos == "PRP$"
    }

    pub fn is_number(&self) -> bool {
        self.pos == "CD"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedDependency {
    pub label: DependencyLabel,
    /// The head word ("A"); 0 only for `root`.
    pub governor: usize,
    /// The dependent word ("B").
    pub dependent: usize,
    pub ordinal: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowTag {
    Main,
    Alternate,
    Extension,
    Exception,
    None,
}

impl FlowTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowTag::Main => "main",
            FlowTag::Alternate => "alternate",
            FlowTag::Extension => "extension",
            FlowTag::Exception => "exception",
            FlowTag::None => "none",
        }
    }

    /// Alternate and extension sentences both describe optional branches.
    pub fn is_alternative(self) -> bool {
        matches!(self, FlowTag::Alternate | FlowTag::Extension)
    }
}

impl fmt::Display for FlowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FlowTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "main" => FlowTag::Main,
            "alternate" => FlowTag::Alternate,
            "extension" => FlowTag::Extension,
            "exception" => FlowTag::Exception,
            "none" => FlowTag::None,
            other => return Err(format!("unknown flow tag `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocFormat {
    General,
    Ucs,
    Stories,
}

impl DocFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            DocFormat::General => "general",
            DocFormat::Ucs => "ucs",
            DocFormat::Stories => "stories",
        }
    }
}

impl fmt::Display for DocFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "general" => DocFormat::General,
            "ucs" => DocFormat::Ucs,
            "stories" => DocFormat::Stories,
            other => return Err(format!("unknown document format `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedSentence {
    pub seq: usize,
    pub text: String,
    pub flow_tag: FlowTag,
    pub step_label: Option<String>,
    /// Originating document, set when documents are merged.
    pub source: Option<String>,
    pub tokens: Vec<Token>,
    pub deps: Vec<TypedDependency>,
}

impl ParsedSentence {
    pub fn token(&self, index: usize) -> Option<&Token> {
        // Tokens are normally stored in index order.
        match self.tokens.get(index.wrapping_sub(1)) {
            Some(t) if t.index == index => Some(t),
            _ => self.tokens.iter().find(|t| t.index == index),
        }
    }

    pub fn governor_of<'a>(&'a self, dep: &TypedDependency) -> Option<&'a Token> {
        self.token(dep.governor)
    }

    pub fn dependent_of<'a>(&'a self, dep: &TypedDependency) -> Option<&'a Token> {
        self.token(dep.dependent)
    }

    pub fn prev_dep(&self, dep: &TypedDependency) -> Option<&TypedDependency> {
        dep.ordinal.checked_sub(1).and_then(|i| self.deps.get(i))
    }

    pub fn next_dep(&self, dep: &TypedDependency) -> Option<&TypedDependency> {
        self.deps.get(dep.ordinal + 1)
    }

    /// Dependencies whose governor is `index`.
    pub fn children(&self, index: usize) -> impl Iterator<Item = &TypedDependency> {
        self.deps.iter().filter(move |d| d.governor == index)
    }

    /// Dependencies whose dependent is `index`.
    pub fn heads(&self, index: usize) -> impl Iterator<Item = &TypedDependency> {
        self.deps.iter().filter(move |d| d.dependent == index)
    }

    pub fn root(&self) -> Option<&TypedDependency> {
        self.deps.iter().find(|d| d.label.is("root"))
    }

    /// Checks index uniqueness, dependency references, ordinals and the
    /// single-root rule.
    pub fn validate(&self) -> Result<()> {
        let err = |message: String| Error::Structure {
            seq: self.seq,
            message,
        };
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.tokens {
            if t.index == 0 {
                return Err(err("token index 0".into()));
            }
            if !seen.insert(t.index) {
                return Err(err(format!("duplicate token index {}", t.index)));
            }
            if t.lemma.is_empty() {
                return Err(err(format!("empty lemma for token {}", t.index)));
            }
        }
        let mut roots = 0;
        for (pos, d) in self.deps.iter().enumerate() {
            if d.ordinal != pos {
                return Err(err(format!(
                    "dependency ordinal {} at position {pos}",
                    d.ordinal
                )));
            }
            if d.label.is("root") {
                roots += 1;
                if d.governor != 0 {
                    return Err(err("root governor must be 0".into()));
                }
            } else if d.governor == 0 || !seen.contains(&d.governor) {
                return Err(err(format!(
                    "{} refers to missing governor {}",
                    d.label, d.governor
                )));
            }
            if !seen.contains(&d.dependent) {
                return Err(err(format!(
                    "{} refers to missing dependent {}",
                    d.label, d.dependent
                )));
            }
        }
        if roots != 1 {
            return Err(err(format!("expected exactly one root, found {roots}")));
        }
        Ok(())
    }

    /// Re-assigns ordinals to positions, for sentences assembled by hand.
    pub fn renumber(&mut self) {
        for (i, d) in self.deps.iter_mut().enumerate() {
            d.ordinal = i;
        }
    }

    pub(crate) fn warn_on_assumptions(&self) {
        let body = self.text.trim_end();
        if !body.ends_with('.') {
            log::warn!("sentence {}: does not end with a period", self.seq);
        }
        let inner = body.strip_suffix('.').unwrap_or(body);
        if inner.contains('.') || inner.contains('-') {
            log::warn!(
                "sentence {}: contains an internal period or hyphen",
                self.seq
            );
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedDocument {
    pub source_id: String,
    pub format: DocFormat,
    pub sentences: Vec<ParsedSentence>,
}

impl ParsedDocument {
    pub fn new(source_id: &str, format: DocFormat) -> Self {
        ParsedDocument {
            source_id: source_id.to_string(),
            format,
            sentences: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut last = None;
        for s in &self.sentences {
            if let Some(prev) = last {
                if s.seq <= prev {
                    return Err(Error::Structure {
                        seq: s.seq,
                        message: format!("sequence number not increasing after {prev}"),
                    });
                }
            }
            last = Some(s.seq);
            s.validate()?;
        }
        Ok(())
    }

    pub fn sentence(&self, seq: usize) -> Option<&ParsedSentence> {
        self.sentences.iter().find(|s| s.seq == seq)
    }

    /// Sets `seq` to 1..=n in current order.
    pub fn renumber(&mut self) {
        for (i, s) in self.sentences.iter_mut().enumerate() {
            s.seq = i + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence() -> ParsedSentence {
        let mut s = ParsedSentence {
            seq: 1,
            text: "User logs in.".into(),
            flow_tag: FlowTag::Main,
            step_label: None,
            source: None,
            tokens: vec![
                Token::new(1, "User", "user", "NN"),
                Token::new(2, "logs", "log", "VBZ"),
                Token::new(3, "in", "in", "RP"),
            ],
            deps: vec![
                TypedDependency {
                    label: DependencyLabel::parse("root"),
                    governor: 0,
                    dependent: 2,
                    ordinal: 0,
                },
                TypedDependency {
                    label: DependencyLabel::parse("nsubj"),
                    governor: 2,
                    dependent: 1,
                    ordinal: 1,
                },
            ],
        };
        s.renumber();
        s
    }

    #[test]
    fn valid_sentence_passes() {
        sentence().validate().unwrap();
    }

    #[test]
    fn two_roots_rejected() {
        let mut s = sentence();
        s.deps.push(TypedDependency {
            label: DependencyLabel::parse("root"),
            governor: 0,
            dependent: 3,
            ordinal: 2,
        });
        assert!(s.validate().is_err());
    }

    #[test]
    fn dangling_dependent_rejected() {
        let mut s = sentence();
        s.deps[1].dependent = 9;
        assert!(matches!(s.validate(), Err(Error::Structure { .. })));
    }

    #[test]
    fn adjacency() {
        let s = sentence();
        assert!(s.prev_dep(&s.deps[0]).is_none());
        assert_eq!(s.next_dep(&s.deps[0]).unwrap().label.base, "nsubj");
    }
}
