//! Word lists consulted by the extraction rules.
//!
//! Lists are loaded from a flat `key = values` file. Keys absent from a file
//! keep their defaults, `key = ...` replaces a list and `key += ...` extends
//! it. Multi-word markers are written with `_` between the words.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// The shipped default lexicon file.
pub const DEFAULT_LEXICON: &str = include_str!("../lexicon/default.lexicon");

/// Environment variable consulted when no lexicon path is given.
pub const LEXICON_ENV: &str = "REMOD_LEXICON";

type Words = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lexicon {
    pub basic_attribs: Words,
    pub non_entity_nouns: Words,
    pub input_verbs: Words,
    pub output_verbs: Words,
    pub processing_verbs: Words,
    pub receive_verbs: Words,
    pub ambiguous_verbs: Words,
    pub jump_verbs: Words,
    /// Verbs whose objects are data rather than things ("enter", "has").
    pub attribute_verbs: Words,
    pub error_keywords: Words,
    /// Placeholder heads ("details", "information") that name no attribute
    /// on their own.
    pub generic_heads: Words,
    pub many_adjectives: Words,
    pub many_determiners: Words,
    pub one_determiners: Words,
    pub min_markers: Words,
    pub max_markers: Words,
    pub system_nouns: Words,
    pub pronouns: Words,
    /// Lemma rewrites applied before names are formed (`user` → `customer`).
    pub aliases: BTreeMap<String, String>,
}

fn words(list: &[&str]) -> Words {
    list.iter().map(|w| w.to_string()).collect()
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            basic_attribs: words(&[
                "name",
                "number",
                "type",
                "address",
                "level",
                "date",
                "time",
                "id",
                "password",
                "price",
                "status",
                "duration",
                "charge",
                "amount",
                "method",
                "information",
                "detail",
                "location",
                "code",
            ]),
            non_entity_nouns: words(&["database", "system", "company", "record"]),
            input_verbs: words(&[
                "input", "enter", "fill", "click", "select", "add", "record", "insert", "choose",
                "submit", "save",
            ]),
            output_verbs: words(&["display", "output", "retrieve", "show", "view", "print"]),
            processing_verbs: words(&[
                "calculate",
                "process",
                "update",
                "delete",
                "search",
                "modify",
                "edit",
                "remove",
                "validate",
            ]),
            receive_verbs: words(&["receive", "accept", "get", "obtain", "acquire", "redeem"]),
            ambiguous_verbs: words(&["get", "send", "prepare"]),
            jump_verbs: words(&["continue", "restart", "go", "repeat", "move", "jump"]),
            attribute_verbs: words(&["enter", "input", "save", "add", "have"]),
            error_keywords: words(&["error", "fail", "wrong", "invalid", "incorrect", "not"]),
            generic_heads: words(&["information", "detail", "data"]),
            many_adjectives: words(&["many", "some", "all", "more", "every", "first", "last"]),
            many_determiners: words(&["each", "all", "some", "any", "many", "every", "multiple"]),
            one_determiners: words(&["a", "an"]),
            min_markers: words(&["at least", "minimum"]),
            max_markers: words(&["at most", "limit", "maximum", "no more than"]),
            system_nouns: words(&["system"]),
            pronouns: words(&[
                "i", "me", "my", "mine", "we", "us", "our", "you", "your", "he", "him", "his",
                "she", "her", "it", "its", "they", "them", "their",
            ]),
            aliases: BTreeMap::new(),
        }
    }
}

impl Lexicon {
    /// Loads `path` over the defaults; `None` yields the defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Lexicon::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                Lexicon::default().overlay(&text)
            }
        }
    }

    /// Parses lexicon text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        Lexicon::default().overlay(text)
    }

    /// Applies a lexicon file on top of `self`.
    pub fn overlay(mut self, text: &str) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, extend, values) = if let Some((k, v)) = line.split_once("+=") {
                (k.trim(), true, v)
            } else if let Some((k, v)) = line.split_once('=') {
                (k.trim(), false, v)
            } else {
                return Err(Error::Lexicon(format!(
                    "line {}: expected `key = values`",
                    i + 1
                )));
            };
            if !seen.insert(key.to_string()) {
                return Err(Error::Lexicon(format!(
                    "line {}: duplicated key `{key}`",
                    i + 1
                )));
            }
            let items = values.split_whitespace().map(|w| w.to_lowercase());
            if key == "aliases" {
                if !extend {
                    self.aliases.clear();
                }
                for item in items {
                    let (from, to) = item.split_once(':').ok_or_else(|| {
                        Error::Lexicon(format!("line {}: alias `{item}` lacks `:`", i + 1))
                    })?;
                    self.aliases.insert(from.to_string(), to.replace('_', " "));
                }
                continue;
            }
            let phrases = matches!(key, "min_markers" | "max_markers");
            let list = self
                .list_mut(key)
                .ok_or_else(|| Error::Lexicon(format!("line {}: unknown key `{key}`", i + 1)))?;
            if !extend {
                list.clear();
            }
            for item in items {
                list.insert(if phrases {
                    item.replace('_', " ")
                } else {
                    item
                });
            }
        }
        if let Some(w) = self.input_verbs.intersection(&self.output_verbs).next() {
            return Err(Error::Lexicon(format!(
                "`{w}` is both an input and an output verb"
            )));
        }
        Ok(self)
    }

    fn list_mut(&mut self, key: &str) -> Option<&mut Words> {
        Some(match key {
            "basic_attribs" => &mut self.basic_attribs,
            "non_entity_nouns" => &mut self.non_entity_nouns,
            "input_verbs" => &mut self.input_verbs,
            "output_verbs" => &mut self.output_verbs,
            "processing_verbs" => &mut self.processing_verbs,
            "receive_verbs" => &mut self.receive_verbs,
            "ambiguous_verbs" => &mut self.ambiguous_verbs,
            "jump_verbs" => &mut self.jump_verbs,
            "attribute_verbs" => &mut self.attribute_verbs,
            "error_keywords" => &mut self.error_keywords,
            "generic_heads" => &mut self.generic_heads,
            "many_adjectives" => &mut self.many_adjectives,
            "many_determiners" => &mut self.many_determiners,
            "one_determiners" => &mut self.one_determiners,
            "min_markers" => &mut self.min_markers,
            "max_markers" => &mut self.max_markers,
            "system_nouns" => &mut self.system_nouns,
            "pronouns" => &mut self.pronouns,
            _ => return None,
        })
    }

    /// The lemma after alias rewriting.
    pub fn canonical<'a>(&'a self, lemma: &'a str) -> &'a str {
        self.aliases.get(lemma).map(String::as_str).unwrap_or(lemma)
    }

    pub fn is_basic(&self, lemma: &str) -> bool {
        self.basic_attribs.contains(&lemma.to_lowercase())
    }

    pub fn is_non_entity(&self, lemma: &str) -> bool {
        self.non_entity_nouns.contains(&lemma.to_lowercase())
    }

    pub fn is_system(&self, lemma: &str) -> bool {
        self.system_nouns.contains(&lemma.to_lowercase())
    }

    pub fn is_generic(&self, lemma: &str) -> bool {
        self.generic_heads.contains(&lemma.to_lowercase())
    }

    pub fn is_pronoun(&self, surface: &str) -> bool {
        self.pronouns.contains(&surface.to_lowercase())
    }
}
