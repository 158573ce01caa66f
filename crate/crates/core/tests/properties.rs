//! Invariants checked over generated inputs and over every fixture.

mod common;

use std::collections::BTreeMap;

use num_rational::Ratio;
use proptest::prelude::*;

use remod::anaphora::resolve_pronouns;
use remod::corpus::{merge, sequence_sentences, shuffle, RawDocument};
use remod::dataflow::Role;
use remod::depgraph::{
    parse_native, to_native_string, DependencyLabel, DocFormat, FlowTag, LabelNormalizer,
    ParsedDocument, ParsedSentence, Token, TypedDependency,
};
use remod::er::RelOrigin;
use remod::eval::{match_sets, metrics};
use remod::fixtures::{fixture, manifest, names, Fixture};
use remod::lexicon::Lexicon;
use remod::pipeline::{run, PipelineConfig};

use common::{document, main_sentence, roles};

const POS: &[&str] = &[
    "NN", "NNS", "VB", "VBZ", "VBN", "JJ", "DT", "IN", "PRP", "CD",
];
const LABELS: &[&str] = &[
    "det", "nsubj", "dobj", "amod", "compound", "nmod:of", "nmod:to", "conj:and", "case", "punct",
];

fn fixtures() -> Vec<Fixture> {
    names().map(|n| fixture(n).unwrap()).collect()
}

fn sentence_strategy(seq: usize) -> impl Strategy<Value = ParsedSentence> {
    (1usize..8).prop_flat_map(move |n| {
        let tokens = prop::collection::vec(("[a-z]{1,6}", prop::sample::select(POS)), n);
        let deps = prop::collection::vec((prop::sample::select(LABELS), 1..=n, 1..=n), 0..2 * n);
        let tag = prop::sample::select(vec![
            FlowTag::Main,
            FlowTag::Alternate,
            FlowTag::Extension,
            FlowTag::Exception,
            FlowTag::None,
        ]);
        let label = prop::option::of("[1-9][a-c]?");
        let source = prop::option::of("[a-z]{1,4}");
        (tokens, deps, 1..=n, tag, label, source).prop_map(
            move |(tokens, deps, root, flow_tag, step_label, source)| {
                let tokens: Vec<Token> = tokens
                    .iter()
                    .enumerate()
                    .map(|(i, (w, pos))| Token::new(i + 1, w, w, pos))
                    .collect();
                let mut all = vec![TypedDependency {
                    label: DependencyLabel::parse("root"),
                    governor: 0,
                    dependent: root,
                    ordinal: 0,
                }];
                for (label, g, d) in deps {
                    all.push(TypedDependency {
                        label: DependencyLabel::parse(label),
                        governor: g,
                        dependent: d,
                        ordinal: all.len(),
                    });
                }
                let text = tokens
                    .iter()
                    .map(|t| t.surface.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                ParsedSentence {
                    seq,
                    text,
                    flow_tag,
                    step_label,
                    source,
                    tokens,
                    deps: all,
                }
            },
        )
    })
}

fn document_strategy() -> impl Strategy<Value = ParsedDocument> {
    (1usize..6)
        .prop_flat_map(|n| {
            let sentences: Vec<_> = (1..=n).map(sentence_strategy).collect();
            let format =
                prop::sample::select(vec![DocFormat::General, DocFormat::Ucs, DocFormat::Stories]);
            (sentences, format)
        })
        .prop_map(|(sentences, format)| {
            let mut doc = ParsedDocument::new("generated", format);
            doc.sentences = sentences;
            doc
        })
}

proptest! {
    #[test]
    fn native_round_trip(doc in document_strategy()) {
        let text = to_native_string(&doc);
        let back = parse_native(&text, &LabelNormalizer::default()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(to_native_string(&back), text);
    }

    #[test]
    fn shuffle_is_a_bijection(doc in document_strategy(), seed in any::<u64>()) {
        let out = shuffle(&doc, seed);
        let seqs: Vec<usize> = out.sentences.iter().map(|s| s.seq).collect();
        prop_assert_eq!(seqs, (1..=doc.sentences.len()).collect::<Vec<_>>());
        let key = |s: &ParsedSentence| {
            let mut s = s.clone();
            s.seq = 0;
            format!("{s:?}")
        };
        let mut before: Vec<_> = doc.sentences.iter().map(key).collect();
        let mut after: Vec<_> = out.sentences.iter().map(key).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
        prop_assert_eq!(shuffle(&doc, seed), out);
    }

    #[test]
    fn metrics_ignore_scale(tp in 0i128..500, fp in 0i128..500, fn_ in 0i128..500, k in 1i128..50) {
        let r = |n: i128| Ratio::from_integer(n);
        let base = metrics(r(tp), r(fp), r(fn_)).unwrap();
        let scaled = metrics(r(k * tp), r(k * fp), r(k * fn_)).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn f1_is_the_harmonic_mean(tp in 0i128..500, fp in 0i128..500, fn_ in 0i128..500) {
        let r = |n: i128| Ratio::from_integer(n);
        let m = metrics(r(tp), r(fp), r(fn_)).unwrap();
        if m.rcl + m.prc > r(0) {
            prop_assert_eq!(m.f1, r(2) * m.rcl * m.prc / (m.rcl + m.prc));
        } else {
            prop_assert_eq!(m.f1, r(0));
        }
    }

    #[test]
    fn matching_is_symmetric(a in prop::collection::vec(0u8..20, 0..15), b in prop::collection::vec(0u8..20, 0..15)) {
        let ab = match_sets(&a, &b);
        let ba = match_sets(&b, &a);
        prop_assert_eq!(ab.tp, ba.tp);
        prop_assert_eq!(ab.fp, ba.fn_);
        prop_assert_eq!(ab.fn_, ba.fp);
    }

    #[test]
    fn sequencing_emits_each_step_once(
        main in 1usize..8,
        anchors in prop::collection::vec(1usize..8, 0..6),
    ) {
        let anchors: Vec<usize> = anchors.into_iter().filter(|&a| a <= main).collect();
        let mut text = String::from("Main Flow:\n");
        for i in 1..=main {
            text.push_str(&format!("{i}. Customer performs main action {i}.\n"));
        }
        text.push_str("Alternate Flows:\n");
        let mut per_anchor: BTreeMap<usize, u8> = BTreeMap::new();
        let mut alternates = Vec::new();
        for a in &anchors {
            let n = per_anchor.entry(*a).or_default();
            let letter = (b'a' + *n) as char;
            *n += 1;
            let sentence = format!("Customer performs alternate {a} {letter}.");
            text.push_str(&format!("{a}{letter}. {sentence}\n"));
            alternates.push((*a, sentence));
        }
        let seq = sequence_sentences(&RawDocument::from_text("gen", &text));
        let texts: Vec<&str> = seq.sentences.iter().map(|s| s.text.as_str()).collect();
        for i in 1..=main {
            let t = format!("Customer performs main action {i}.");
            prop_assert_eq!(texts.iter().filter(|x| **x == t).count(), 1, "{}", t);
        }
        for (a, t) in &alternates {
            prop_assert_eq!(texts.iter().filter(|x| **x == t.as_str()).count(), 1, "{}", t);
            let at = texts.iter().position(|x| *x == t.as_str()).unwrap();
            let anchor = format!("Customer performs main action {a}.");
            let anchor_at = texts.iter().position(|x| *x == anchor).unwrap();
            prop_assert!(anchor_at < at);
            let next = format!("Customer performs main action {}.", a + 1);
            if let Some(next_at) = texts.iter().position(|x| *x == next) {
                prop_assert!(at < next_at);
            }
        }
    }

    #[test]
    fn fixture_shuffles_keep_sentence_local_results(seed in any::<u64>(), pick in 0usize..9) {
        let f = fixture(names().nth(pick).unwrap()).unwrap();
        let view = |doc: &ParsedDocument| {
            let out = run(doc, &f.lexicon, PipelineConfig::default());
            (
                common::entities(&out),
                common::attributes(&out),
                common::cardinalities(&out),
                out.er
                    .model
                    .relationships
                    .iter()
                    .filter(|r| r.origin != RelOrigin::Dataflow)
                    .map(|r| r.key().to_string())
                    .collect::<Vec<_>>(),
            )
        };
        prop_assert_eq!(view(&shuffle(&f.doc, seed)), view(&f.doc));
    }

    #[test]
    fn anaphora_is_idempotent(seed in any::<u64>(), pick in 0usize..9) {
        let f = fixture(names().nth(pick).unwrap()).unwrap();
        let doc = shuffle(&f.doc, seed);
        let once = resolve_pronouns(&doc, &f.lexicon).doc;
        let twice = resolve_pronouns(&once, &f.lexicon).doc;
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn verb_class_decides_the_role(verb in prop::sample::select(vec![
        "enter", "select", "record", "display", "show", "print", "archive", "stamp",
    ])) {
        let doc = document(
            DocFormat::General,
            &[main_sentence(
                &format!("The/DT customer/NN {verb}s/VBZ/{verb} the/DT price/NN ./."),
                "root 0 3; det 2 1; nsubj 3 2; det 5 4; dobj 3 5; punct 3 6",
            )],
        );
        let mut as_input = Lexicon::default();
        as_input.output_verbs.remove(verb);
        as_input.input_verbs.insert(verb.to_string());
        let mut as_output = Lexicon::default();
        as_output.input_verbs.remove(verb);
        as_output.attribute_verbs.remove(verb);
        as_output.output_verbs.insert(verb.to_string());
        let input = roles(&run(&doc, &as_input, PipelineConfig::default()));
        let output = roles(&run(&doc, &as_output, PipelineConfig::default()));
        prop_assert_eq!(input, common::set(&["price:input"]));
        prop_assert_eq!(output, common::set(&["price:output"]));
    }
}

#[test]
fn fixtures_round_trip_through_native_text() {
    for f in fixtures() {
        let text = to_native_string(&f.doc);
        let back = parse_native(&text, &LabelNormalizer::default()).unwrap();
        assert_eq!(back, f.doc, "{}", f.name);
    }
}

#[test]
fn frequency_equals_provenance_on_every_fixture() {
    for f in fixtures() {
        for doc in [f.doc.clone(), shuffle(&f.doc, 7)] {
            let out = run(&doc, &f.lexicon, PipelineConfig::default());
            for e in &out.er.model.entities {
                assert_eq!(e.frequency, e.provenance.len(), "{} {}", f.name, e.name);
                assert!(e.frequency >= 1, "{} {}", f.name, e.name);
            }
        }
    }
}

#[test]
fn merged_entities_sum_their_frequencies() {
    let entries = manifest();
    let mut pairs = 0;
    for (i, a) in entries.iter().enumerate() {
        for b in entries[i + 1..].iter().filter(|b| b.domain == a.domain) {
            pairs += 1;
            let (fa, fb) = (fixture(&a.name).unwrap(), fixture(&b.name).unwrap());
            let lex = Lexicon::default()
                .overlay(remod::fixtures::files(&a.name).unwrap().lexicon)
                .and_then(|l| l.overlay(remod::fixtures::files(&b.name).unwrap().lexicon))
                .unwrap();
            let counts = |doc: &ParsedDocument| -> BTreeMap<String, usize> {
                run(doc, &lex, PipelineConfig::default())
                    .er
                    .model
                    .entities
                    .iter()
                    .map(|e| (e.name.clone(), e.frequency))
                    .collect()
            };
            let mut want = counts(&fa.doc);
            for (name, k) in counts(&fb.doc) {
                *want.entry(name).or_default() += k;
            }
            let merged = merge(&[fa.doc.clone(), fb.doc.clone()]).unwrap();
            assert_eq!(counts(&merged), want, "{} + {}", a.name, b.name);
            let sources: Vec<_> = merged
                .sentences
                .iter()
                .map(|s| s.source.clone().unwrap())
                .collect();
            assert!(sources
                .iter()
                .all(|s| *s == fa.doc.source_id || *s == fb.doc.source_id));
        }
    }
    assert!(pairs >= 1);
}

#[test]
fn roles_only_take_known_values() {
    for f in fixtures() {
        let out = run(&f.doc, &f.lexicon, PipelineConfig::default());
        for r in &out.roles {
            assert!(matches!(r.role, Role::Input | Role::Output));
            assert!(
                out.er
                    .model
                    .attributes
                    .iter()
                    .any(|a| a.name == r.attribute),
                "{}: role for unknown attribute {}",
                f.name,
                r.attribute
            );
        }
    }
}
