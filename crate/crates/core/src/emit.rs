//! Model files and diagram sources.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bp::{BPModel, BpEdge, Control, EdgeKind, FlowStep};
use crate::dataflow::DataRole;
use crate::er::{Attribute, CardValue, Cardinality, Diagnostic, ERModel, Entity, Relationship};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "remod-model/1";

/// The single structured document written for one extraction run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub schema_version: String,
    pub source_id: String,
    pub entities: Vec<Entity>,
    pub attributes: Vec<Attribute>,
    pub relationships: Vec<Relationship>,
    pub cardinalities: Vec<Cardinality>,
    pub data_roles: Vec<DataRole>,
    pub bp_steps: Vec<FlowStep>,
    pub bp_edges: Vec<BpEdge>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ModelDocument {
    pub fn new(
        source_id: &str,
        er: &ERModel,
        bp: Option<&BPModel>,
        roles: &[DataRole],
        diagnostics: &[Diagnostic],
    ) -> Self {
        let mut er = er.clone();
        er.sort();
        let mut data_roles = roles.to_vec();
        data_roles.sort_by(|a, b| {
            (&a.attribute, a.role, &a.operation).cmp(&(&b.attribute, b.role, &b.operation))
        });
        let (mut bp_steps, mut bp_edges) = bp
            .map(|b| (b.steps.clone(), b.edges.clone()))
            .unwrap_or_default();
        bp_steps.sort_by_key(|s| s.step_id);
        bp_edges.sort();
        ModelDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            source_id: source_id.to_string(),
            entities: er.entities,
            attributes: er.attributes,
            relationships: er.relationships,
            cardinalities: er.cardinalities,
            data_roles,
            bp_steps,
            bp_edges,
            diagnostics: diagnostics.to_vec(),
        }
    }

    pub fn er_model(&self) -> ERModel {
        ERModel {
            entities: self.entities.clone(),
            attributes: self.attributes.clone(),
            relationships: self.relationships.clone(),
            cardinalities: self.cardinalities.clone(),
        }
    }

    pub fn bp_model(&self) -> BPModel {
        BPModel {
            steps: self.bp_steps.clone(),
            edges: self.bp_edges.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(|v| v.as_str()) {
            Some(SCHEMA_VERSION) => Ok(serde_json::from_value(value)?),
            Some(other) => Err(Error::Schema(format!(
                "model schema `{other}`, expected `{SCHEMA_VERSION}`"
            ))),
            None => Err(Error::Schema("model lacks schema_version".into())),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

pub fn write_model(doc: &ModelDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, doc.to_json()).map_err(|e| Error::io(path, e))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn card_label(v: CardValue) -> String {
    v.to_string()
}

/// ER diagram: entity boxes, attribute ellipses and one diamond per related
/// entity pair labelled with every verb between them.
pub fn er_diagram(er: &ERModel) -> String {
    let mut out = String::from("graph er {\n");
    let mut er = er.clone();
    er.sort();
    for e in &er.entities {
        let _ = writeln!(
            out,
            "  {} [shape=box, label={}];",
            quote(&format!("e:{}", e.name)),
            quote(&e.name)
        );
    }
    for a in &er.attributes {
        let owner = a.owner.as_deref().unwrap_or("");
        let id = quote(&format!("a:{owner}:{}", a.name));
        let _ = writeln!(out, "  {id} [shape=ellipse, label={}];", quote(&a.name));
        if let Some(o) = &a.owner {
            let _ = writeln!(out, "  {} -- {id};", quote(&format!("e:{o}")));
        }
    }
    let mut pairs: BTreeMap<(&str, &str), Vec<&Relationship>> = BTreeMap::new();
    for r in &er.relationships {
        let pair = if r.subject <= r.object {
            (r.subject.as_str(), r.object.as_str())
        } else {
            (r.object.as_str(), r.subject.as_str())
        };
        pairs.entry(pair).or_default().push(r);
    }
    for ((a, b), rels) in pairs {
        let mut verbs: Vec<&str> = Vec::new();
        for r in &rels {
            if !verbs.contains(&r.verb_phrase.as_str()) {
                verbs.push(&r.verb_phrase);
            }
        }
        let id = quote(&format!("r:{a}|{b}"));
        let _ = writeln!(
            out,
            "  {id} [shape=diamond, label={}];",
            quote(&verbs.join("/"))
        );
        for end in [a, b] {
            let card = rels.iter().find_map(|r| {
                er.cardinalities
                    .iter()
                    .find(|c| c.entity == end && c.relationship.as_ref() == Some(&r.key()))
                    .map(|c| c.value)
            });
            let label = card
                .map(|v| format!(" [label={}]", quote(&card_label(v))))
                .unwrap_or_default();
            let _ = writeln!(out, "  {} -- {id}{label};", quote(&format!("e:{end}")));
        }
    }
    out.push_str("}\n");
    out
}

/// BP diagram: rounded operation boxes with stereotypes, data nodes, solid
/// data edges and dashed control edges.
pub fn bp_diagram(bp: &BPModel) -> String {
    let mut out = String::from("digraph bp {\n");
    for s in &bp.steps {
        let mut label = format!("<<{}>>\\n{}: {}", s.path.stereotype(), s.actor, s.verb);
        if let Some(Control::Condition { expr, .. }) = &s.control {
            label.push_str(&format!("\\n[{expr}]"));
        }
        let _ = writeln!(
            out,
            "  s{} [shape=box, style=rounded, label=\"{}\"];",
            s.step_id,
            label.replace('"', "\\\"")
        );
        for d in &s.data_out {
            let id = quote(&format!("d{}:{d}", s.step_id));
            let _ = writeln!(out, "  {id} [shape=note, label={}];", quote(d));
            let _ = writeln!(out, "  s{} -> {id};", s.step_id);
        }
    }
    for e in &bp.edges {
        match e.kind {
            EdgeKind::Control => {
                let _ = writeln!(out, "  s{} -> s{} [style=dashed];", e.from, e.to);
            }
            EdgeKind::Data => {
                let (Some(from), Some(to)) = (bp.step(e.from), bp.step(e.to)) else {
                    continue;
                };
                for d in from.data_out.iter().filter(|d| to.data_in.contains(d)) {
                    let _ = writeln!(
                        out,
                        "  {} -> s{};",
                        quote(&format!("d{}:{d}", from.step_id)),
                        to.step_id
                    );
                }
            }
        }
    }
    out.push_str("}\n");
    out
}
