//! CoNLL-U reader.
//!
//! HEAD/DEPREL give the basic tree; when the DEPS column is filled the
//! enhanced graph is used instead, since it carries the propagated
//! conjunct edges the rules rely on. Multiword-token ranges and empty nodes
//! are skipped. Optional sentence comments `# text`, `# flow_tag`,
//! `# step_label` and a document comment `# newdoc id` are honoured.

use std::fs;
use std::path::Path;

use super::{
    DocFormat, FlowTag, LabelNormalizer, ParsedDocument, ParsedSentence, Token, TypedDependency,
};
use crate::error::{Error, Result};

pub fn load_conllu(path: impl AsRef<Path>) -> Result<ParsedDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("conllu")
        .to_string();
    parse_conllu(&text, &id, &LabelNormalizer::default())
}

struct Pending {
    text: Option<String>,
    flow_tag: FlowTag,
    step_label: Option<String>,
    tokens: Vec<Token>,
    // (dependent, governor, raw label) in file order
    arcs: Vec<(usize, usize, String)>,
}

impl Pending {
    fn new() -> Self {
        Pending {
            text: None,
            flow_tag: FlowTag::Main,
            step_label: None,
            tokens: Vec::new(),
            arcs: Vec::new(),
        }
    }

    fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn parse_conllu(
    text: &str,
    default_id: &str,
    normalizer: &LabelNormalizer,
) -> Result<ParsedDocument> {
    let mut doc = ParsedDocument::new(default_id, DocFormat::General);
    let mut pending = Pending::new();

    let flush = |doc: &mut ParsedDocument, p: Pending| -> Result<()> {
        if p.is_empty() {
            return Ok(());
        }
        let seq = doc.sentences.len() + 1;
        let text = p.text.unwrap_or_else(|| {
            p.tokens
                .iter()
                .map(|t| t.surface.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        });
        let deps = p
            .arcs
            .into_iter()
            .enumerate()
            .map(|(ordinal, (dependent, governor, label))| TypedDependency {
                label: normalizer.normalize(&label),
                governor,
                dependent,
                ordinal,
            })
            .collect();
        let s = ParsedSentence {
            seq,
            text,
            flow_tag: p.flow_tag,
            step_label: p.step_label,
            source: None,
            tokens: p.tokens,
            deps,
        };
        s.validate()?;
        s.warn_on_assumptions();
        doc.sentences.push(s);
        Ok(())
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim_end();
        if line.trim().is_empty() {
            flush(&mut doc, std::mem::replace(&mut pending, Pending::new()))?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "text" => pending.text = Some(value.to_string()),
                    "flow_tag" => {
                        pending.flow_tag = value.parse().map_err(|e| Error::load(lineno, e))?
                    }
                    "step_label" => pending.step_label = Some(value.to_string()),
                    "newdoc id" => doc.source_id = value.to_string(),
                    "format" => doc.format = value.parse().map_err(|e| Error::load(lineno, e))?,
                    _ => {}
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::load(
                lineno,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            continue;
        }
        let index: usize = cols[0]
            .parse()
            .map_err(|_| Error::load(lineno, format!("invalid ID `{}`", cols[0])))?;
        let lemma = if cols[2] == "_" {
            cols[1].to_lowercase()
        } else {
            cols[2].to_lowercase()
        };
        let pos = if cols[4] != "_" { cols[4] } else { cols[3] };
        pending.tokens.push(Token::new(index, cols[1], &lemma, pos));

        if cols[8] != "_" {
            for arc in cols[8].split('|') {
                let (head, label) = arc
                    .split_once(':')
                    .ok_or_else(|| Error::load(lineno, format!("invalid DEPS entry `{arc}`")))?;
                let head: usize = head
                    .parse()
                    .map_err(|_| Error::load(lineno, format!("non-integer head in `{arc}`")))?;
                pending.arcs.push((index, head, label.to_string()));
            }
        } else {
            let head: usize = cols[6]
                .parse()
                .map_err(|_| Error::load(lineno, format!("non-integer HEAD `{}`", cols[6])))?;
            pending.arcs.push((index, head, cols[7].to_string()));
        }
    }
    flush(&mut doc, pending)?;
    Ok(doc)
}
