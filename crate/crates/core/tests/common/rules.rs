//! One minimal sentence per extraction rule, with the exact additions the
//! rule calls for. Shared by the `tdr_rules` suite and the acceptance run.

use std::collections::BTreeSet;

use remod::bp::{Control, FlowPath};
use remod::dataflow::Tdr29Mode;
use remod::depgraph::{DocFormat, ParsedDocument};
use remod::lexicon::Lexicon;
use remod::pipeline::{PipelineConfig, PipelineOutput};

use super::*;

pub type Check = Result<(), String>;

pub struct RuleCase {
    pub rule: u8,
    pub check: fn() -> Check,
}

fn same(what: &str, actual: BTreeSet<String>, expected: &[&str]) -> Check {
    let expected = set(expected);
    if actual == expected {
        Ok(())
    } else {
        Err(format!("{what}: got {actual:?}, expected {expected:?}"))
    }
}

fn fired(what: &str, rules: BTreeSet<u8>, rule: u8) -> Check {
    if rules.contains(&rule) {
        Ok(())
    } else {
        Err(format!("{what}: rule {rule} not in provenance {rules:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run1(tokens: &str, deps: &str) -> PipelineOutput {
    extract(&single(tokens, deps))
}

fn run_general(sentences: &[Compact]) -> PipelineOutput {
    extract(&document(DocFormat::General, sentences))
}

/// Entity and attribute views, plus the rule in their provenance.
fn er_exact(out: &PipelineOutput, rule: u8, ents: &[&str], attrs: &[&str]) -> Check {
    same("entities", entities(out), ents)?;
    same("attributes", attributes(out), attrs)?;
    fired("entity/attribute", er_rules(out), rule)
}

fn rel_exact(out: &PipelineOutput, rule: u8, rels: &[&str]) -> Check {
    same("relationships", relationships(out), rels)?;
    fired("relationship", relationship_rules(out), rule)
}

const SELECTS_BOOK: &str = "The/DT customer/NN selects/VBZ/select the/DT book/NN ./.";
const SVO: &str = "root 0 3; det 2 1; nsubj 3 2; det 5 4; dobj 3 5; punct 3 6";
const PASSIVE_BY: &str =
    "root 0 4; det 2 1; nsubjpass 4 2; auxpass 4 3; case 7 5; det 7 6; nmod:agent 4 7; punct 4 8";

pub fn tdr01() -> Check {
    let out = run1(
        "The/DT store/NN manager/NN arrives/VBZ/arrive ./.",
        "root 0 4; det 3 1; compound 3 2; nsubj 4 3; punct 4 5",
    );
    er_exact(&out, 1, &["store manager:2"], &[])
}

pub fn tdr02() -> Check {
    let out = run1(
        "The/DT password/NN expires/VBZ/expire ./.",
        "root 0 3; det 2 1; nsubj 3 2; punct 3 4",
    );
    er_exact(&out, 2, &[], &["-.password"])
}

pub fn tdr03() -> Check {
    let out = run1(
        "Approve/VB the/DT loan/NN ./.",
        "root 0 1; det 3 2; dobj 1 3; punct 1 4",
    );
    er_exact(&out, 3, &["loan:1"], &[])
}

pub fn tdr04() -> Check {
    // Basic object, and a non-basic object of an input verb.
    let out = run_general(&[
        main_sentence(
            "Note/VB the/DT price/NN ./.",
            "root 0 1; det 3 2; dobj 1 3; punct 1 4",
        ),
        main_sentence(
            "Enter/VB the/DT card/NN ./.",
            "root 0 1; det 3 2; dobj 1 3; punct 1 4",
        ),
    ]);
    er_exact(&out, 4, &[], &["-.card", "-.price"])
}

pub fn tdr05() -> Check {
    let out = run1(
        "Note/VB the/DT final/JJ price/NN ./.",
        "root 0 1; det 4 2; amod 4 3; dobj 1 4; punct 1 5",
    );
    er_exact(&out, 5, &[], &["-.final price"])
}

pub fn tdr06() -> Check {
    let out = run_general(&[
        main_sentence(
            "Note/VB the/DT name/NN of/IN the/DT author/NN ./.",
            "root 0 1; det 3 2; dobj 1 3; case 6 4; det 6 5; nmod:of 3 6; punct 1 7",
        ),
        main_sentence(
            "Note/VB the/DT date/NN of/IN the/DT time/NN ./.",
            "root 0 1; det 3 2; dobj 1 3; case 6 4; det 6 5; nmod:of 3 6; punct 1 7",
        ),
    ]);
    er_exact(&out, 6, &["author:1"], &["-.date of time", "author.name"])
}

pub fn tdr07() -> Check {
    let out = run1(
        "Note/VB the/DT price/NN in/IN the/DT catalogue/NN ./.",
        "root 0 1; det 3 2; dobj 1 3; case 6 4; det 6 5; nmod:in 3 6; punct 1 7",
    );
    er_exact(&out, 7, &["catalogue:1"], &["catalogue.price"])
}

pub fn tdr08() -> Check {
    let out = run1(
        "Go/VB to/TO the/DT warehouse/NN ./.",
        "root 0 1; case 4 2; det 4 3; nmod:to 1 4; punct 1 5",
    );
    er_exact(&out, 8, &["warehouse:1"], &[])
}

pub fn tdr09() -> Check {
    let out = run_general(&[
        main_sentence(
            "Sign/VB with/IN a/DT pen/NN ./.",
            "root 0 1; case 4 2; det 4 3; nmod:with 1 4; punct 1 5",
        ),
        main_sentence(
            "Sign/VB with/IN a/DT password/NN ./.",
            "root 0 1; case 4 2; det 4 3; nmod:with 1 4; punct 1 5",
        ),
    ]);
    er_exact(&out, 9, &["pen:1"], &["-.password"])
}

pub fn tdr10() -> Check {
    let out = run1(
        "Note/VB the/DT author/NN 's/POS address/NN ./.",
        "root 0 1; det 3 2; nmod:poss 5 3; case 3 4; dobj 1 5; punct 1 6",
    );
    er_exact(&out, 10, &["author:1"], &["author.address"])
}

pub fn tdr11() -> Check {
    let out = run_general(&[
        main_sentence(
            "The/DT initial/JJ level/NN rises/VBZ/rise ./.",
            "root 0 4; det 3 1; amod 3 2; nsubj 4 3; punct 4 5",
        ),
        main_sentence(
            "The/DT red/JJ car/NN stops/VBZ/stop ./.",
            "root 0 4; det 3 1; amod 3 2; nsubj 4 3; punct 4 5",
        ),
    ]);
    er_exact(&out, 11, &["car:2"], &["-.initial level"])
}

pub fn tdr12() -> Check {
    let out = run_general(&[
        main_sentence(
            "Pay/VB with/IN the/DT card/NN number/NN ./.",
            "root 0 1; case 5 2; det 5 3; compound 5 4; nmod:with 1 5; punct 1 6",
        ),
        main_sentence(
            "Pay/VB with/IN the/DT credit/NN card/NN ./.",
            "root 0 1; case 5 2; det 5 3; compound 5 4; nmod:with 1 5; punct 1 6",
        ),
    ]);
    er_exact(
        &out,
        12,
        &["card:1", "credit card:2"],
        &["card.card number"],
    )
}

pub fn tdr13() -> Check {
    let out = run_general(&[
        main_sentence(
            "Buy/VB books/NNS/book and/CC pens/NNS/pen ./.",
            "root 0 1; dobj 1 2; cc 2 3; conj:and 2 4; punct 1 5",
        ),
        main_sentence(
            "Note/VB the/DT name/NN and/CC address/NN ./.",
            "root 0 1; det 3 2; dobj 1 3; cc 3 4; conj:and 3 5; punct 1 6",
        ),
    ]);
    er_exact(&out, 13, &["book:2", "pen:1"], &["-.address", "-.name"])
}

pub fn tdr14() -> Check {
    let out = run1("The/DT customer/NN buys/VBZ/buy a/DT book/NN ./.", SVO);
    rel_exact(&out, 14, &["customer (buy) book"])
}

pub fn tdr15() -> Check {
    let out = run1(
        "The/DT book/NN is/VBZ/be written/VBN/write by/IN the/DT author/NN ./.",
        PASSIVE_BY,
    );
    rel_exact(&out, 15, &["book (write) author"])
}

pub fn tdr16() -> Check {
    let out = run1(
        "The/DT author/NN of/IN the/DT book/NN signs/VBZ/sign ./.",
        "root 0 6; det 2 1; nsubj 6 2; case 5 3; det 5 4; nmod:of 2 5; punct 6 7",
    );
    rel_exact(&out, 16, &["author (has) book"])
}

pub fn tdr17() -> Check {
    let out = run1(
        "The/DT customer/NN buys/VBZ/buy the/DT cover/NN of/IN the/DT book/NN ./.",
        "root 0 3; det 2 1; nsubj 3 2; det 5 4; dobj 3 5; case 8 6; det 8 7; nmod:of 5 8; punct 3 9",
    );
    rel_exact(&out, 17, &["cover (has) book", "customer (buy) cover"])
}

pub fn tdr18() -> Check {
    let out = run1(
        "The/DT clerk/NN sends/VBZ/send the/DT parcel/NN to/TO the/DT customer/NN ./.",
        "root 0 3; det 2 1; nsubj 3 2; det 5 4; dobj 3 5; case 8 6; det 8 7; nmod:to 3 8; punct 3 9",
    );
    rel_exact(
        &out,
        18,
        &[
            "clerk (send to) customer",
            "clerk (send) parcel",
            "parcel (send to) customer",
        ],
    )
}

pub fn tdr19() -> Check {
    let out = run1(
        "The/DT parcel/NN is/VBZ/be delivered/VBN/deliver to/TO the/DT customer/NN ./.",
        "root 0 4; det 2 1; nsubjpass 4 2; auxpass 4 3; case 7 5; det 7 6; nmod:to 4 7; punct 4 8",
    );
    rel_exact(&out, 19, &["parcel (deliver to) customer"])
}

pub fn tdr20() -> Check {
    let out = run1(
        "The/DT clerk/NN ensures/VBZ/ensure the/DT parcel/NN is/VBZ/be sent/VBN/send to/TO the/DT customer/NN ./.",
        "root 0 3; det 2 1; nsubj 3 2; det 5 4; nsubjpass 7 5; auxpass 7 6; ccomp 3 7; \
         case 10 8; det 10 9; nmod:to 7 10; punct 3 11",
    );
    rel_exact(
        &out,
        20,
        &[
            "clerk (ensure) parcel",
            "clerk (send to) customer",
            "parcel (send to) customer",
        ],
    )
}

pub fn tdr21() -> Check {
    // The compound makes "capital city" an entity on its own.
    let out = run1(
        "The/DT customer/NN lives/VBZ/live in/IN the/DT capital/NN city/NN ./.",
        "root 0 3; det 2 1; nsubj 3 2; case 7 4; det 7 5; compound 7 6; nmod:in 3 7; punct 3 8",
    );
    rel_exact(&out, 21, &["customer (live in) capital city"])
}

pub fn tdr22() -> Check {
    let out = run1(
        "The/DT customer/NN waits/VBZ/wait for/IN the/DT parcel/NN ./.",
        "root 0 3; det 2 1; nsubj 3 2; case 6 4; det 6 5; nmod:for 3 6; punct 3 7",
    );
    rel_exact(&out, 22, &["customer (wait for) parcel"])
}

pub fn tdr23() -> Check {
    let out = run1(
        "Buy/VB a/DT book/NN as/IN a/DT customer/NN ./.",
        "root 0 1; det 3 2; dobj 1 3; case 6 4; det 6 5; nmod:as 1 6; punct 1 7",
    );
    rel_exact(&out, 23, &["customer (buy) book"])
}

pub fn tdr24() -> Check {
    let out = run1(
        "Buy/VB many/JJ books/NNS/book ./.",
        "root 0 1; amod 3 2; dobj 1 3; punct 1 4",
    );
    same("cardinalities", cardinalities(&out), &["book=N"])
}

pub fn tdr25() -> Check {
    let deps = "root 0 1; case 3 2; nmod:npmod 4 3; nummod 5 4; dobj 1 5; punct 1 6";
    let out = run_general(&[
        main_sentence("Buy/VB at/IN most/JJS 3/CD books/NNS/book ./.", deps),
        main_sentence("Buy/VB at/IN least/JJS 2/CD pens/NNS/pen ./.", deps),
    ]);
    same("cardinalities", cardinalities(&out), &["book=3", "pen=N~2"])
}

pub fn tdr26() -> Check {
    let deps = "root 0 1; det 3 2; dobj 1 3; punct 1 4";
    let out = run_general(&[
        main_sentence("Buy/VB a/DT book/NN ./.", deps),
        main_sentence("Buy/VB all/DT pens/NNS/pen ./.", deps),
    ]);
    same("cardinalities", cardinalities(&out), &["book=1", "pen=N"])
}

pub fn tdr27() -> Check {
    let out = run1(
        "The/DT customer/NN enters/VBZ/enter the/DT password/NN ./.",
        SVO,
    );
    same("roles", roles(&out), &["password:input"])
}

pub fn tdr28() -> Check {
    let out = run1(
        "The/DT system/NN displays/VBZ/display the/DT price/NN ./.",
        SVO,
    );
    same("roles", roles(&out), &["price:output"])
}

pub fn tdr29() -> Check {
    let doc = document(
        DocFormat::General,
        &[
            main_sentence("The/DT system/NN gets/VBZ/get the/DT date/NN ./.", SVO),
            main_sentence("The/DT customer/NN gets/VBZ/get the/DT price/NN ./.", SVO),
        ],
    );
    same(
        "roles (prose)",
        roles(&extract(&doc)),
        &["date:input", "price:output"],
    )?;
    let config = PipelineConfig {
        tdr29_mode: Tdr29Mode::Pseudocode,
        ..Default::default()
    };
    let out = extract_with(&doc, &Lexicon::default(), config);
    same(
        "roles (pseudocode)",
        roles(&out),
        &["date:output", "price:input"],
    )
}

pub fn tdr30() -> Check {
    let out = run1(
        "The/DT price/NN is/VBZ/be entered/VBN/enter by/IN the/DT clerk/NN ./.",
        PASSIVE_BY,
    );
    same("roles", roles(&out), &["price:input"])
}

pub fn tdr31() -> Check {
    let out = run1(
        "The/DT price/NN is/VBZ/be displayed/VBN/display by/IN the/DT screen/NN ./.",
        PASSIVE_BY,
    );
    same("roles", roles(&out), &["price:output"])
}

pub fn tdr32() -> Check {
    let out = run_general(&[
        main_sentence(SELECTS_BOOK, SVO),
        main_sentence(
            "The/DT system/NN displays/VBZ/display the/DT price/NN ./.",
            SVO,
        ),
    ]);
    let got = steps(&out);
    ensure(
        got == ["external customer select", "system system display"],
        || format!("steps: {got:?}"),
    )
}

pub fn tdr33() -> Check {
    let out = run_general(&[
        main_sentence(
            "The/DT system/NN receives/VBZ/receive the/DT payment/NN ./.",
            SVO,
        ),
        main_sentence(
            "The/DT payment/NN is/VBZ/be received/VBN/receive by/IN the/DT system/NN ./.",
            PASSIVE_BY,
        ),
    ]);
    let got = steps(&out);
    ensure(
        got == ["external external receive", "system system receive"],
        || format!("steps: {got:?}"),
    )
}

pub fn tdr34() -> Check {
    let out = run1(
        "The/DT system/NN shows/VBZ/show an/DT invalid/JJ price/NN ./.",
        "root 0 3; det 2 1; nsubj 3 2; det 6 4; amod 6 5; dobj 3 6; punct 3 7",
    );
    let got = steps(&out);
    ensure(got == ["exception system invalid price"], || {
        format!("steps: {got:?}")
    })
}

pub fn tdr35() -> Check {
    let out = run1(
        "If/IN the/DT customer/NN enters/VBZ/enter the/DT code/NN ,/, the/DT system/NN shows/VBZ/show the/DT price/NN ./.",
        "root 0 10; mark 4 1; det 3 2; nsubj 4 3; det 6 5; dobj 4 6; punct 10 7; det 9 8; \
         nsubj 10 9; advcl:if 10 4; det 12 11; dobj 10 12; punct 10 13",
    );
    let got = steps(&out);
    ensure(got == ["system system show"], || format!("steps: {got:?}"))?;
    let step = &out.bp.model.steps[0];
    let expected = Control::Condition {
        expr: "enters code".into(),
        then_branch: Some("shows price".into()),
        else_branch: None,
    };
    ensure(step.control.as_ref() == Some(&expected), || {
        format!("control: {:?}", step.control)
    })?;
    ensure(
        step.data_in == ["code"] && step.data_out == ["price"],
        || format!("data: {:?} -> {:?}", step.data_in, step.data_out),
    )
}

pub fn tdr36() -> Check {
    let out = run1(
        "The/DT system/NN validates/VBZ/validate the/DT password/NN ./.",
        SVO,
    );
    let got = steps(&out);
    ensure(got == ["system system validate"], || {
        format!("steps: {got:?}")
    })?;
    let step = &out.bp.model.steps[0];
    let expected = Control::Condition {
        expr: "validate password".into(),
        then_branch: None,
        else_branch: None,
    };
    ensure(step.control.as_ref() == Some(&expected), || {
        format!("control: {:?}", step.control)
    })
}

pub fn jump_document() -> ParsedDocument {
    document(
        DocFormat::Ucs,
        &[
            Compact {
                tag: "main 1",
                tokens: SELECTS_BOOK,
                deps: SVO,
            },
            Compact {
                tag: "main 2",
                tokens: "The/DT system/NN displays/VBZ/display the/DT price/NN ./.",
                deps: SVO,
            },
            Compact {
                tag: "alternate 2a",
                tokens: "The/DT customer/NN goes/VBZ/go to/TO step/NN 1/CD ./.",
                deps: "root 0 3; det 2 1; nsubj 3 2; case 5 4; nmod:to 3 5; nummod 5 6; punct 3 7",
            },
        ],
    )
}

pub fn tdr37() -> Check {
    let out = extract(&jump_document());
    let bp = &out.bp.model;
    let jump = bp
        .steps
        .iter()
        .find(|s| s.verb == "go")
        .ok_or_else(|| format!("no jump step in {:?}", steps(&out)))?;
    ensure(jump.path == FlowPath::AlternateSystem, || {
        format!("jump path {}", jump.path)
    })?;
    ensure(jump.control == Some(Control::Jump { target: 1 }), || {
        format!("jump control {:?}", jump.control)
    })
}

pub const CASES: [RuleCase; 37] = [
    RuleCase {
        rule: 1,
        check: tdr01,
    },
    RuleCase {
        rule: 2,
        check: tdr02,
    },
    RuleCase {
        rule: 3,
        check: tdr03,
    },
    RuleCase {
        rule: 4,
        check: tdr04,
    },
    RuleCase {
        rule: 5,
        check: tdr05,
    },
    RuleCase {
        rule: 6,
        check: tdr06,
    },
    RuleCase {
        rule: 7,
        check: tdr07,
    },
    RuleCase {
        rule: 8,
        check: tdr08,
    },
    RuleCase {
        rule: 9,
        check: tdr09,
    },
    RuleCase {
        rule: 10,
        check: tdr10,
    },
    RuleCase {
        rule: 11,
        check: tdr11,
    },
    RuleCase {
        rule: 12,
        check: tdr12,
    },
    RuleCase {
        rule: 13,
        check: tdr13,
    },
    RuleCase {
        rule: 14,
        check: tdr14,
    },
    RuleCase {
        rule: 15,
        check: tdr15,
    },
    RuleCase {
        rule: 16,
        check: tdr16,
    },
    RuleCase {
        rule: 17,
        check: tdr17,
    },
    RuleCase {
        rule: 18,
        check: tdr18,
    },
    RuleCase {
        rule: 19,
        check: tdr19,
    },
    RuleCase {
        rule: 20,
        check: tdr20,
    },
    RuleCase {
        rule: 21,
        check: tdr21,
    },
    RuleCase {
        rule: 22,
        check: tdr22,
    },
    RuleCase {
        rule: 23,
        check: tdr23,
    },
    RuleCase {
        rule: 24,
        check: tdr24,
    },
    RuleCase {
        rule: 25,
        check: tdr25,
    },
    RuleCase {
        rule: 26,
        check: tdr26,
    },
    RuleCase {
        rule: 27,
        check: tdr27,
    },
    RuleCase {
        rule: 28,
        check: tdr28,
    },
    RuleCase {
        rule: 29,
        check: tdr29,
    },
    RuleCase {
        rule: 30,
        check: tdr30,
    },
    RuleCase {
        rule: 31,
        check: tdr31,
    },
    RuleCase {
        rule: 32,
        check: tdr32,
    },
    RuleCase {
        rule: 33,
        check: tdr33,
    },
    RuleCase {
        rule: 34,
        check: tdr34,
    },
    RuleCase {
        rule: 35,
        check: tdr35,
    },
    RuleCase {
        rule: 36,
        check: tdr36,
    },
    RuleCase {
        rule: 37,
        check: tdr37,
    },
];
