//! The native dependency file format.
//!
//! ```text
//! #doc <source_id> <format>
//!
//! #sent <seq> <flow_tag> [step_label]
//! [#src <source_id>]
//! <raw sentence text>
//! T <index> <surface> <lemma> <pos>
//! D <ordinal> <label[:subtype]> <governor> <dependent>
//! ```
//!
//! Token indices live in their own fields, so hyphenated words need no
//! escaping. Labels outside the canonical inventory are written verbatim with
//! a trailing `# unrecognized` flag.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{
    DocFormat, FlowTag, LabelNormalizer, ParsedDocument, ParsedSentence, Token, TypedDependency,
};
use crate::error::{Error, Result};

const UNRECOGNIZED_FLAG: &str = "# unrecognized";

pub fn load_native(path: impl AsRef<Path>) -> Result<ParsedDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_native(&text, &LabelNormalizer::default())
}

pub fn parse_native(text: &str, normalizer: &LabelNormalizer) -> Result<ParsedDocument> {
    let mut doc: Option<ParsedDocument> = None;
    let mut current: Option<ParsedSentence> = None;
    // Set right after `#sent`/`#src`: the next line is the sentence text.
    let mut expect_text = false;

    let finish = |doc: &mut Option<ParsedDocument>, s: Option<ParsedSentence>| -> Result<()> {
        if let Some(s) = s {
            s.validate()?;
            s.warn_on_assumptions();
            doc.as_mut()
                .expect("header precedes sentences")
                .sentences
                .push(s);
        }
        Ok(())
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if expect_text {
            if let Some(rest) = line.strip_prefix("#src ") {
                let s = current.as_mut().expect("sentence open");
                s.source = Some(rest.trim().to_string());
                continue;
            }
            current.as_mut().expect("sentence open").text = line.to_string();
            expect_text = false;
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields[0] {
            "#doc" => {
                if doc.is_some() {
                    return Err(Error::load(lineno, "duplicate #doc header"));
                }
                if fields.len() != 3 {
                    return Err(Error::load(lineno, "expected `#doc <source_id> <format>`"));
                }
                let format: DocFormat = fields[2].parse().map_err(|e| Error::load(lineno, e))?;
                doc = Some(ParsedDocument::new(fields[1], format));
            }
            "#sent" => {
                if doc.is_none() {
                    return Err(Error::load(lineno, "#sent before #doc header"));
                }
                finish(&mut doc, current.take())?;
                if !(3..=4).contains(&fields.len()) {
                    return Err(Error::load(
                        lineno,
                        "expected `#sent <seq> <flow_tag> [step_label]`",
                    ));
                }
                let seq = parse_index(fields[1], lineno, "sequence number")?;
                let flow_tag: FlowTag = fields[2].parse().map_err(|e| Error::load(lineno, e))?;
                current = Some(ParsedSentence {
                    seq,
                    text: String::new(),
                    flow_tag,
                    step_label: fields.get(3).map(|s| s.to_string()),
                    source: None,
                    tokens: Vec::new(),
                    deps: Vec::new(),
                });
                expect_text = true;
            }
            "T" => {
                let s = current
                    .as_mut()
                    .ok_or_else(|| Error::load(lineno, "token outside a sentence"))?;
                if fields.len() != 5 {
                    return Err(Error::load(
                        lineno,
                        "expected `T <index> <surface> <lemma> <pos>`",
                    ));
                }
                let index = parse_index(fields[1], lineno, "token index")?;
                s.tokens
                    .push(Token::new(index, fields[2], fields[3], fields[4]));
            }
            "D" => {
                let s = current
                    .as_mut()
                    .ok_or_else(|| Error::load(lineno, "dependency outside a sentence"))?;
                let body = trimmed
                    .strip_suffix(UNRECOGNIZED_FLAG)
                    .unwrap_or(trimmed)
                    .trim_end();
                let fields: Vec<&str> = body.split_whitespace().collect();
                if fields.len() != 5 {
                    return Err(Error::load(
                        lineno,
                        "expected `D <ordinal> <label> <governor> <dependent>`",
                    ));
                }
                let ordinal = parse_index(fields[1], lineno, "ordinal")?;
                if ordinal != s.deps.len() {
                    return Err(Error::load(
                        lineno,
                        format!("ordinal {ordinal} out of order, expected {}", s.deps.len()),
                    ));
                }
                s.deps.push(TypedDependency {
                    label: normalizer.normalize(fields[2]),
                    governor: parse_index(fields[3], lineno, "governor")?,
                    dependent: parse_index(fields[4], lineno, "dependent")?,
                    ordinal,
                });
            }
            other if other.starts_with('#') => {}
            other => {
                return Err(Error::load(lineno, format!("unexpected record `{other}`")));
            }
        }
    }
    if expect_text {
        return Err(Error::load(text.lines().count(), "missing sentence text"));
    }
    finish(&mut doc, current.take())?;
    let doc = doc.ok_or_else(|| Error::load(1, "missing #doc header"))?;
    doc.validate()?;
    Ok(doc)
}

fn parse_index(field: &str, line: usize, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::load(line, format!("invalid {what} `{field}`")))
}

pub fn to_native_string(doc: &ParsedDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#doc {} {}", doc.source_id, doc.format);
    for s in &doc.sentences {
        out.push('\n');
        let _ = write!(out, "#sent {} {}", s.seq, s.flow_tag);
        if let Some(label) = &s.step_label {
            let _ = write!(out, " {label}");
        }
        out.push('\n');
        if let Some(src) = &s.source {
            let _ = writeln!(out, "#src {src}");
        }
        let _ = writeln!(out, "{}", s.text);
        for t in &s.tokens {
            let _ = writeln!(out, "T {} {} {} {}", t.index, t.surface, t.lemma, t.pos);
        }
        for d in &s.deps {
            let _ = write!(
                out,
                "D {} {} {} {}",
                d.ordinal, d.label, d.governor, d.dependent
            );
            if !d.label.recognized {
                let _ = write!(out, " {UNRECOGNIZED_FLAG}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn save_native(doc: &ParsedDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_native_string(doc)).map_err(|e| Error::io(path, e))
}
