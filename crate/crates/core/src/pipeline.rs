//! The full extraction run: anaphora, ER model, data roles, BP model.

use crate::anaphora::{resolve_pronouns, Unresolved};
use crate::bp::{extract_bp, stories_operations, BpOutput};
use crate::dataflow::{categorize_attributes, DataRole, Tdr29Mode};
use crate::depgraph::{DocFormat, ParsedDocument};
use crate::emit::ModelDocument;
use crate::er::{build_er_model, Diagnostic, EachMode, ErConfig, ErOutput};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineConfig {
    pub each_mode: EachMode,
    pub tdr29_mode: Tdr29Mode,
    /// Overrides the format recorded in the document.
    pub format: Option<DocFormat>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    /// The document after pronoun replacement.
    pub doc: ParsedDocument,
    pub unresolved: Vec<Unresolved>,
    pub er: ErOutput,
    pub roles: Vec<DataRole>,
    pub bp: BpOutput,
}

impl PipelineOutput {
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out: Vec<Diagnostic> = self
            .unresolved
            .iter()
            .map(|u| {
                Diagnostic::new(
                    Some(u.seq),
                    format!(
                        "pronoun `{}` (token {}) left unresolved",
                        u.surface, u.token
                    ),
                )
            })
            .collect();
        out.extend(self.er.diagnostics.iter().cloned());
        out.extend(self.bp.diagnostics.iter().cloned());
        out
    }

    pub fn model_document(&self) -> ModelDocument {
        ModelDocument::new(
            &self.doc.source_id,
            &self.er.model,
            Some(&self.bp.model),
            &self.roles,
            &self.diagnostics(),
        )
    }
}

pub fn run(doc: &ParsedDocument, lex: &Lexicon, config: PipelineConfig) -> PipelineOutput {
    let resolution = resolve_pronouns(doc, lex);
    let mut doc = resolution.doc;
    if let Some(f) = config.format {
        doc.format = f;
    }
    let er = build_er_model(
        &doc,
        lex,
        ErConfig {
            each_mode: config.each_mode,
        },
    );
    let roles = categorize_attributes(&doc, &er, lex, config.tdr29_mode);
    let bp = match doc.format {
        DocFormat::Stories => stories_operations(&doc, &er, lex),
        _ => extract_bp(&doc, &er, lex),
    };
    PipelineOutput {
        doc,
        unresolved: resolution.unresolved,
        er,
        roles,
        bp,
    }
}
