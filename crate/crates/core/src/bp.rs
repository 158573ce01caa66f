//! Business process extraction (rules 32 to 37).
//!
//! Sentences are walked in order. Each produces zero or more steps on one of
//! five paths: external and system actions on the main flow, their
//! alternate counterparts for branch sentences, and exceptions. Data entered
//! by an external step is handed to the next system step.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataflow::reachable;
use crate::depgraph::{FlowTag, ParsedDocument, ParsedSentence, TypedDependency};
use crate::er::{Diagnostic, ErOutput, SentenceRoles};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowPath {
    External,
    AlternateExternal,
    System,
    AlternateSystem,
    Exception,
}

impl FlowPath {
    pub fn is_external(self) -> bool {
        matches!(self, FlowPath::External | FlowPath::AlternateExternal)
    }

    pub fn is_system(self) -> bool {
        matches!(self, FlowPath::System | FlowPath::AlternateSystem)
    }

    /// Diagram stereotype.
    pub fn stereotype(self) -> &'static str {
        match self {
            FlowPath::External => "External Action",
            FlowPath::AlternateExternal => "Alternate External Action",
            FlowPath::System => "System Action",
            FlowPath::AlternateSystem => "Alternate System Action",
            FlowPath::Exception => "Exception",
        }
    }

    fn external(alternate: bool) -> Self {
        if alternate {
            FlowPath::AlternateExternal
        } else {
            FlowPath::External
        }
    }

    fn system(alternate: bool) -> Self {
        if alternate {
            FlowPath::AlternateSystem
        } else {
            FlowPath::System
        }
    }
}

impl fmt::Display for FlowPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlowPath::External => "external",
            FlowPath::AlternateExternal => "alternate_external",
            FlowPath::System => "system",
            FlowPath::AlternateSystem => "alternate_system",
            FlowPath::Exception => "exception",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Control {
    Condition {
        expr: String,
        then_branch: Option<String>,
        else_branch: Option<String>,
    },
    Jump {
        target: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowStep {
    pub step_id: usize,
    pub path: FlowPath,
    pub actor: String,
    pub verb: String,
    pub data_in: Vec<String>,
    pub data_out: Vec<String>,
    pub entity_refs: Vec<String>,
    pub control: Option<Control>,
    /// Sentence the step came from.
    pub provenance: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Data,
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BpEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BPModel {
    pub steps: Vec<FlowStep>,
    pub edges: Vec<BpEdge>,
}

impl BPModel {
    pub fn step(&self, id: usize) -> Option<&FlowStep> {
        self.steps.iter().find(|s| s.step_id == id)
    }

    pub fn on_path(&self, path: FlowPath) -> impl Iterator<Item = &FlowStep> {
        self.steps.iter().filter(move |s| s.path == path)
    }
}

#[derive(Debug, Clone, Default)]
pub struct BpOutput {
    pub model: BPModel,
    pub diagnostics: Vec<Diagnostic>,
}

pub const SYSTEM_ACTOR: &str = "system";

struct Sentence<'a> {
    s: &'a ParsedSentence,
    roles: &'a SentenceRoles,
    lex: &'a Lexicon,
}

impl<'a> Sentence<'a> {
    fn lemma(&self, i: usize) -> &'a str {
        self.s.token(i).map(|t| t.lemma.as_str()).unwrap_or("")
    }

    fn is_system(&self, i: usize) -> bool {
        self.lex.is_system(self.lemma(i))
    }

    fn entity_refs(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self
            .roles
            .entities
            .values()
            .chain(self.roles.stands_for.values())
            .collect();
        set.into_iter().cloned().collect()
    }

    fn data(&self, verb: usize) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in reachable(self.s, verb, &self.s.deps, self.roles) {
            let name = &self.roles.attributes[&t];
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
        out
    }

    fn dobj_lemma(&self, verb: usize) -> Option<&'a str> {
        self.s
            .children(verb)
            .find(|d| d.label.is("dobj"))
            .map(|d| self.lemma(d.dependent))
    }

    /// "verb object", the verb as written.
    fn clause(&self, verb: usize) -> String {
        let v = self
            .s
            .token(verb)
            .map(|t| t.surface.to_lowercase())
            .unwrap_or_default();
        match self.dobj_lemma(verb) {
            Some(o) => format!("{v} {o}"),
            None => v,
        }
    }

    fn passive(&self, verb: usize) -> bool {
        self.s
            .children(verb)
            .any(|d| d.label.is("nsubjpass") || d.label.is("auxpass"))
    }

    /// Subject of a verb: active subject, else a `by` agent.
    fn subject(&self, verb: usize) -> Option<usize> {
        let kids: Vec<&TypedDependency> = self.s.children(verb).collect();
        kids.iter()
            .find(|d| d.label.is("nsubj"))
            .or_else(|| {
                kids.iter()
                    .find(|d| d.label.is_nmod("agent") || d.label.is_nmod("by"))
            })
            .or_else(|| kids.iter().find(|d| d.label.is("nsubjpass")))
            .map(|d| d.dependent)
    }

    fn actor_name(&self, token: usize) -> Option<String> {
        self.roles.entity_of(token).map(str::to_string)
    }
}

/// A step under construction; ids are assigned once the walk is done.
struct Draft {
    step: FlowStep,
    jump_to: Option<String>,
}

fn draft(path: FlowPath, actor: String, verb: String, seq: usize, refs: Vec<String>) -> Draft {
    Draft {
        step: FlowStep {
            step_id: 0,
            path,
            actor,
            verb,
            data_in: Vec::new(),
            data_out: Vec::new(),
            entity_refs: refs,
            control: None,
            provenance: seq,
        },
        jump_to: None,
    }
}

/// Rule 34: an error keyword on either side of xcomp/amod/neg/dobj, or an
/// error verb at the root.
fn exception_verb(x: &Sentence<'_>) -> Option<String> {
    let err = |i: usize| x.lex.error_keywords.contains(x.lemma(i));
    for d in &x.s.deps {
        let l = &d.label;
        if (l.is("xcomp") || l.is("amod") || l.is("neg") || l.is("dobj"))
            && (err(d.governor) || err(d.dependent))
        {
            let (a, b) = (d.governor.min(d.dependent), d.governor.max(d.dependent));
            return Some(format!("{} {}", x.lemma(a), x.lemma(b)));
        }
    }
    let root = x.s.root()?.dependent;
    err(root).then(|| x.lemma(root).to_string())
}

fn numeric_prefix(label: &str) -> Option<&str> {
    let end = label
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(label.len());
    (end > 0).then(|| &label[..end])
}

/// Rule 37: the step number a jump verb points at.
fn jump_target(x: &Sentence<'_>, verb: usize) -> Option<String> {
    let near: BTreeSet<usize> = std::iter::once(verb)
        .chain(x.s.children(verb).map(|d| d.dependent))
        .chain(x.s.heads(verb).map(|d| d.governor))
        .collect();
    let numbers = x.s.deps.iter().filter(|d| {
        (d.label.is("nummod") || d.label.is("dobj"))
            && x.s
                .token(d.dependent)
                .map(|t| t.is_number())
                .unwrap_or(false)
    });
    let mut fallback = None;
    for d in numbers {
        let text = x.s.token(d.dependent)?.surface.clone();
        if near.contains(&d.governor) {
            return Some(text);
        }
        fallback.get_or_insert(text);
    }
    fallback
}

fn sentence_steps(x: &Sentence<'_>, out: &mut Vec<Draft>, diags: &mut Vec<Diagnostic>) {
    let s = x.s;
    let alternate = s.flow_tag.is_alternative();
    let refs = x.entity_refs();
    let system = || SYSTEM_ACTOR.to_string();

    if let Some(verb) = exception_verb(x) {
        out.push(draft(FlowPath::Exception, system(), verb, s.seq, refs));
        return;
    }
    if s.flow_tag == FlowTag::Exception {
        let verb = s
            .root()
            .map(|d| x.lemma(d.dependent).to_string())
            .unwrap_or_default();
        out.push(draft(FlowPath::Exception, system(), verb, s.seq, refs));
        return;
    }

    // Rule 35: `if` clauses.
    let cond = s.deps.iter().find_map(|d| {
        if d.label.is("advcl") && d.label.subtype.as_deref() == Some("if") {
            return Some((d.governor, d.dependent));
        }
        if d.label.is("mark") && x.lemma(d.dependent) == "if" {
            return s
                .heads(d.governor)
                .find(|h| h.label.is("advcl"))
                .map(|h| (h.governor, d.governor));
        }
        None
    });
    if let Some((then_verb, if_verb)) = cond {
        let else_branch = s
            .deps
            .iter()
            .find(|d| d.label.is("advmod") && x.lemma(d.dependent) == "else")
            .map(|d| x.clause(d.governor));
        let mut d = draft(
            FlowPath::system(alternate),
            system(),
            x.lemma(then_verb).to_string(),
            s.seq,
            refs,
        );
        d.step.control = Some(Control::Condition {
            expr: x.clause(if_verb),
            then_branch: Some(x.clause(then_verb)),
            else_branch,
        });
        d.step.data_out = x.data(then_verb);
        d.step.data_in = x.data(if_verb);
        out.push(d);
        return;
    }

    let mut verbs: Vec<usize> = s
        .tokens
        .iter()
        .filter(|t| t.is_verb())
        .map(|t| t.index)
        .collect();
    verbs.sort_unstable();
    for verb in verbs {
        let lemma = x.lemma(verb);
        let lex = x.lex;
        let Some(subject) = x.subject(verb) else {
            continue;
        };
        let sys_subject = x.is_system(subject);
        let external = x.actor_name(subject);

        // Rule 36: validation is a condition on the data it checks.
        if lemma == "validate" && sys_subject {
            let mut d = draft(
                FlowPath::system(alternate),
                system(),
                lemma.into(),
                s.seq,
                refs.clone(),
            );
            d.step.data_in = x.data(verb);
            let mut expr = vec![lemma.to_string()];
            expr.extend(d.step.data_in.iter().cloned());
            d.step.control = Some(Control::Condition {
                expr: expr.join(" "),
                then_branch: None,
                else_branch: None,
            });
            out.push(d);
            continue;
        }
        // Rule 37: jumps.
        if lex.jump_verbs.contains(lemma) {
            let mut d = draft(
                FlowPath::system(alternate),
                system(),
                lemma.into(),
                s.seq,
                refs.clone(),
            );
            d.jump_to = jump_target(x, verb);
            if d.jump_to.is_none() {
                diags.push(Diagnostic::new(
                    Some(s.seq),
                    format!("`{lemma}` names no step to jump to"),
                ));
            }
            out.push(d);
            continue;
        }
        // Rule 33: data arriving.
        if lex.receive_verbs.contains(lemma) {
            if sys_subject && x.passive(verb) {
                let mut d = draft(
                    FlowPath::system(alternate),
                    system(),
                    lemma.into(),
                    s.seq,
                    refs.clone(),
                );
                d.step.data_in = x.data(verb);
                out.push(d);
            } else {
                let actor = if sys_subject {
                    s.children(verb)
                        .find(|d| d.label.is_nmod("from"))
                        .and_then(|d| x.actor_name(d.dependent))
                        .unwrap_or_else(|| "external".to_string())
                } else {
                    external.unwrap_or_else(|| x.lemma(subject).to_string())
                };
                let mut d = draft(
                    FlowPath::external(alternate),
                    actor,
                    lemma.into(),
                    s.seq,
                    refs.clone(),
                );
                d.step.data_out = x.data(verb);
                out.push(d);
            }
            continue;
        }
        // Rule 32, and the remaining actions by subject.
        if sys_subject {
            let mut d = draft(
                FlowPath::system(alternate),
                system(),
                lemma.into(),
                s.seq,
                refs.clone(),
            );
            if lex.output_verbs.contains(lemma) {
                d.step.data_out = x.data(verb);
            } else {
                d.step.data_in = x.data(verb);
            }
            out.push(d);
        } else if let Some(actor) = external {
            let mut d = draft(
                FlowPath::external(alternate),
                actor,
                lemma.into(),
                s.seq,
                refs.clone(),
            );
            d.step.data_out = x.data(verb);
            out.push(d);
        }
    }
}

/// Assigns ids, hands external data to the next system step, resolves jumps
/// and draws the edges.
fn finish(doc: &ParsedDocument, drafts: Vec<Draft>, diags: &mut Vec<Diagnostic>) -> BPModel {
    let mut steps: Vec<FlowStep> = Vec::with_capacity(drafts.len());
    let mut jumps: Vec<(usize, String)> = Vec::new();
    for (i, d) in drafts.into_iter().enumerate() {
        let mut step = d.step;
        step.step_id = i + 1;
        if let Some(t) = d.jump_to {
            jumps.push((i, t));
        }
        steps.push(step);
    }

    // External data becomes the input of the next system step.
    for i in 0..steps.len() {
        if !steps[i].path.is_external() || steps[i].data_out.is_empty() {
            continue;
        }
        match (i + 1..steps.len()).find(|&j| steps[j].path.is_system()) {
            Some(j) => {
                let carried = steps[i].data_out.clone();
                for x in carried {
                    if !steps[j].data_in.contains(&x) {
                        steps[j].data_in.push(x);
                    }
                }
            }
            None => diags.push(Diagnostic::new(
                Some(steps[i].provenance),
                format!(
                    "data of step {} ({}) is not consumed by any later system step",
                    steps[i].step_id, steps[i].verb
                ),
            )),
        }
    }

    // Jumps land on the first step of the sentence carrying that number.
    let mut by_label: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &doc.sentences {
        if let Some(label) = s.step_label.as_deref() {
            let exact = label.chars().all(|c| c.is_ascii_digit());
            if exact || !by_label.contains_key(numeric_prefix(label).unwrap_or("")) {
                if let Some(p) = numeric_prefix(label) {
                    if exact || s.flow_tag == FlowTag::Main {
                        by_label.insert(p, s.seq);
                    }
                }
            }
        }
    }
    let mut jump_edges = Vec::new();
    for (i, target) in jumps {
        let landing = by_label
            .get(target.as_str())
            .and_then(|seq| steps.iter().find(|s| s.provenance >= *seq))
            .map(|s| s.step_id);
        match landing {
            Some(t) => {
                steps[i].control = Some(Control::Jump { target: t });
                jump_edges.push(BpEdge {
                    from: steps[i].step_id,
                    to: t,
                    kind: EdgeKind::Control,
                });
            }
            None => diags.push(Diagnostic::new(
                Some(steps[i].provenance),
                format!("jump to step {target} has no target; dropped"),
            )),
        }
    }

    let mut edges = Vec::new();
    for w in steps.windows(2) {
        if !matches!(w[0].control, Some(Control::Jump { .. })) {
            edges.push(BpEdge {
                from: w[0].step_id,
                to: w[1].step_id,
                kind: EdgeKind::Control,
            });
        }
    }
    edges.extend(jump_edges);

    // Data edges from the latest earlier producer of each consumed item.
    for j in 0..steps.len() {
        for x in steps[j].data_in.clone() {
            match (0..j).rev().find(|&i| steps[i].data_out.contains(&x)) {
                Some(i) => edges.push(BpEdge {
                    from: steps[i].step_id,
                    to: steps[j].step_id,
                    kind: EdgeKind::Data,
                }),
                None if steps[j].path.is_system() => diags.push(Diagnostic::new(
                    Some(steps[j].provenance),
                    format!(
                        "`{x}` used by step {} has no earlier source",
                        steps[j].step_id
                    ),
                )),
                None => {}
            }
        }
    }
    edges.sort();
    edges.dedup();
    BPModel { steps, edges }
}

/// Rules 32 to 37 over a sequenced document.
pub fn extract_bp(doc: &ParsedDocument, er: &ErOutput, lex: &Lexicon) -> BpOutput {
    let mut drafts = Vec::new();
    let mut diagnostics = Vec::new();
    for (s, roles) in doc.sentences.iter().zip(&er.extraction.roles) {
        let x = Sentence { s, roles, lex };
        sentence_steps(&x, &mut drafts, &mut diagnostics);
    }
    let model = finish(doc, drafts, &mut diagnostics);
    BpOutput { model, diagnostics }
}

/// One external step per user story: the role is the actor, the wanted
/// action the verb, its object the data.
pub fn stories_operations(doc: &ParsedDocument, er: &ErOutput, _lex: &Lexicon) -> BpOutput {
    let mut drafts = Vec::new();
    let mut diagnostics = Vec::new();
    for (s, roles) in doc.sentences.iter().zip(&er.extraction.roles) {
        let x = Sentence {
            s,
            roles,
            lex: _lex,
        };
        let actor = s
            .deps
            .iter()
            .find(|d| d.label.is_nmod("as"))
            .and_then(|d| x.actor_name(d.dependent));
        let Some(root) = s.root().map(|d| d.dependent) else {
            continue;
        };
        // "want to choose", "am able to search": the complement carries the action.
        let mut verb = root;
        while let Some(next) = s.children(verb).find(|d| {
            d.label.is("xcomp") && s.token(d.dependent).map(|t| t.is_verb()).unwrap_or(false)
        }) {
            verb = next.dependent;
        }
        if !s.token(verb).map(|t| t.is_verb()).unwrap_or(false) {
            diagnostics.push(Diagnostic::new(
                Some(s.seq),
                "story has no action verb; skipped",
            ));
            continue;
        }
        let mut phrase = x.lemma(verb).to_string();
        for d in s.children(verb) {
            if d.label.is("compound") && d.label.subtype.as_deref() == Some("prt") {
                phrase.push(' ');
                phrase.push_str(x.lemma(d.dependent));
            }
        }
        let objects: BTreeSet<String> = s
            .children(verb)
            .filter(|d| d.label.is_object() || d.label.base == "nmod")
            .filter_map(|d| roles.entity_of(d.dependent).map(str::to_string))
            .collect();
        let actor = actor.unwrap_or_else(|| {
            s.children(root)
                .find(|d| d.label.is("nsubj"))
                .map(|d| x.lemma(d.dependent).to_string())
                .unwrap_or_else(|| "user".to_string())
        });
        let mut d = draft(
            FlowPath::External,
            actor,
            phrase,
            s.seq,
            objects.into_iter().collect(),
        );
        d.step.data_out = x.data(verb);
        drafts.push(d);
    }
    let mut steps = Vec::new();
    for (i, d) in drafts.into_iter().enumerate() {
        let mut step = d.step;
        step.step_id = i + 1;
        steps.push(step);
    }
    BpOutput {
        model: BPModel {
            steps,
            edges: Vec::new(),
        },
        diagnostics,
    }
}
