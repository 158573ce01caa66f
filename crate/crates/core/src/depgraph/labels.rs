use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Base relation names the rule engine knows about.
pub const CANONICAL_BASES: &[&str] = &[
    "acl",
    "advcl",
    "advmod",
    "amod",
    "appos",
    "aux",
    "auxpass",
    "case",
    "cc",
    "ccomp",
    "compound",
    "conj",
    "cop",
    "csubj",
    "csubjpass",
    "dep",
    "det",
    "discourse",
    "dobj",
    "expl",
    "iobj",
    "mark",
    "mwe",
    "neg",
    "nmod",
    "nsubj",
    "nsubjpass",
    "nummod",
    "parataxis",
    "pobj",
    "punct",
    "ref",
    "root",
    "xcomp",
];

/// A typed-dependency relation name, split into its base and optional
/// colon-separated subtype (`nmod:of` → `nmod` + `of`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DependencyLabel {
    pub base: String,
    pub subtype: Option<String>,
    pub recognized: bool,
}

impl DependencyLabel {
    /// Parses a label without normalization.
    pub fn parse(raw: &str) -> Self {
        let (base, subtype) = match raw.split_once(':') {
            Some((b, s)) if !s.is_empty() => (b.to_string(), Some(s.to_string())),
            Some((b, _)) => (b.to_string(), None),
            None => (raw.to_string(), None),
        };
        let recognized = CANONICAL_BASES.contains(&base.as_str());
        DependencyLabel {
            base,
            subtype,
            recognized,
        }
    }

    pub fn new(base: &str, subtype: Option<&str>) -> Self {
        DependencyLabel {
            base: base.to_string(),
            subtype: subtype.map(str::to_string),
            recognized: CANONICAL_BASES.contains(&base),
        }
    }

    pub fn is(&self, base: &str) -> bool {
        self.base == base
    }

    /// `nmod` with the given preposition subtype.
    pub fn is_nmod(&self, prep: &str) -> bool {
        self.base == "nmod" && self.subtype.as_deref() == Some(prep)
    }

    pub fn is_subject(&self) -> bool {
        matches!(self.base.as_str(), "nsubj" | "nsubjpass")
    }

    pub fn is_object(&self) -> bool {
        matches!(self.base.as_str(), "dobj" | "iobj" | "pobj")
    }
}

impl fmt::Display for DependencyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subtype {
            Some(s) => write!(f, "{}:{}", self.base, s),
            None => f.write_str(&self.base),
        }
    }
}

/// Folds legacy and treebank-specific relation spellings onto the canonical
/// inventory the rules are written against.
#[derive(Debug, Clone)]
pub struct LabelNormalizer {
    exact: BTreeMap<String, String>,
}

impl Default for LabelNormalizer {
    fn default() -> Self {
        let pairs = [
            ("nn", "compound"),
            ("agent", "nmod:agent"),
            ("poss", "nmod:poss"),
            ("nmod:and", "conj:and"),
            ("nmod:or", "conj:or"),
            ("obj", "dobj"),
            ("nsubj:pass", "nsubjpass"),
            ("csubj:pass", "csubjpass"),
            ("aux:pass", "auxpass"),
            ("complm", "mark"),
            ("infmod", "acl"),
            ("partmod", "acl"),
            ("vmod", "acl"),
            ("num", "nummod"),
            ("rcmod", "acl:relcl"),
            ("prt", "compound:prt"),
        ];
        LabelNormalizer {
            exact: pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }
}

impl LabelNormalizer {
    /// A normalizer that leaves every label untouched.
    pub fn identity() -> Self {
        LabelNormalizer {
            exact: BTreeMap::new(),
        }
    }

    pub fn with_mapping(mut self, from: &str, to: &str) -> Self {
        self.exact.insert(from.to_string(), to.to_string());
        self
    }

    pub fn normalize(&self, raw: &str) -> DependencyLabel {
        if let Some(target) = self.exact.get(raw) {
            return DependencyLabel::parse(target);
        }
        // Collapsed-preposition spellings of older parsers: prep_of, prepc_by.
        for prefix in ["prep_", "prepc_"] {
            if let Some(p) = raw.strip_prefix(prefix) {
                if p == "by" {
                    return DependencyLabel::new("nmod", Some("agent"));
                }
                return DependencyLabel::new("nmod", Some(p));
            }
        }
        // Universal Dependencies v2 oblique nominals.
        if raw == "obl" {
            return DependencyLabel::new("nmod", None);
        }
        if let Some(p) = raw.strip_prefix("obl:") {
            return DependencyLabel::new("nmod", Some(p));
        }
        DependencyLabel::parse(raw)
    }
}
