//! Pronoun replacement ahead of rule application.
//!
//! Two rules are applied. Within a sentence carrying `nmod:as(V, N)` the
//! noun `N` names the speaker, so first-person pronouns in that sentence
//! take its place ("As a visitor, I can ..."). Otherwise a pronoun takes the
//! noun subject of the nearest preceding sentence, looking back at most
//! [`LOOKBACK`] sentences.
//!
//! A replaced token keeps its pronoun tag while its surface leaves the
//! pronoun list, which is how later stages tell a resolved pronoun from an
//! ordinary noun and why a second pass changes nothing.

use serde::Serialize;

use crate::depgraph::{ParsedDocument, ParsedSentence, Token};
use crate::lexicon::Lexicon;

pub const LOOKBACK: usize = 3;

const FIRST_PERSON: &[&str] = &["i", "me", "my", "mine", "we", "us", "our"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unresolved {
    pub seq: usize,
    pub token: usize,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub doc: ParsedDocument,
    pub unresolved: Vec<Unresolved>,
}

/// True for a pronoun-tagged token that has already been replaced.
pub fn is_resolved_pronoun(token: &Token, lex: &Lexicon) -> bool {
    token.is_pronoun() && !lex.is_pronoun(&token.surface)
}

fn speaker(s: &ParsedSentence) -> Option<&Token> {
    s.deps
        .iter()
        .filter(|d| d.label.is_nmod("as"))
        .filter_map(|d| s.token(d.dependent))
        .find(|t| t.is_noun())
}

fn noun_subject<'a>(s: &'a ParsedSentence, lex: &Lexicon) -> Option<&'a Token> {
    s.deps
        .iter()
        .filter(|d| d.label.is("nsubj") || d.label.is("nsubjpass"))
        .filter_map(|d| s.token(d.dependent))
        .find(|t| t.is_noun() || is_resolved_pronoun(t, lex))
}

pub fn resolve_pronouns(doc: &ParsedDocument, lex: &Lexicon) -> Resolution {
    let mut out = doc.clone();
    let mut unresolved = Vec::new();
    for i in 0..out.sentences.len() {
        let own = speaker(&out.sentences[i]).map(|t| (t.surface.clone(), t.lemma.clone()));
        let previous = (1..=LOOKBACK)
            .filter_map(|k| i.checked_sub(k))
            .find_map(|j| noun_subject(&out.sentences[j], lex))
            .map(|t| (t.surface.clone(), t.lemma.clone()));
        let s = &mut out.sentences[i];
        for t in s.tokens.iter_mut() {
            if !t.is_pronoun() || !lex.is_pronoun(&t.surface) {
                continue;
            }
            let first_person = FIRST_PERSON.contains(&t.surface.to_lowercase().as_str());
            let referent = match (&own, first_person) {
                (Some(r), true) => Some(r),
                _ => previous.as_ref(),
            };
            match referent {
                Some((surface, lemma)) => {
                    t.surface = surface.clone();
                    t.lemma = lemma.clone();
                }
                None => {
                    log::warn!(
                        "sentence {}: pronoun `{}` left unresolved",
                        s.seq,
                        t.surface
                    );
                    unresolved.push(Unresolved {
                        seq: s.seq,
                        token: t.index,
                        surface: t.surface.clone(),
                    });
                }
            }
        }
    }
    Resolution {
        doc: out,
        unresolved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depgraph::{parse_native, LabelNormalizer};

    const LOGIN: &str = "#doc login general

#sent 1 main
User selects login option.
T 1 User user NN
T 2 selects select VBZ
T 3 login login NN
T 4 option option NN
T 5 . . .
D 0 nsubj 2 1
D 1 root 0 2
D 2 compound 4 3
D 3 dobj 2 4
D 4 punct 2 5

#sent 2 main
He enters ID and password.
T 1 He he PRP
T 2 enters enter VBZ
T 3 ID id NN
T 4 and and CC
T 5 password password NN
T 6 . . .
D 0 nsubj 2 1
D 1 root 0 2
D 2 dobj 2 3
D 3 cc 3 4
D 4 dobj 2 5
D 5 conj:and 3 5
D 6 punct 2 6
";

    const VISITOR: &str = "#doc story stories

#sent 1 main
As a visitor, I can create a new account.
T 1 As as IN
T 2 a a DT
T 3 visitor visitor NN
T 4 , , ,
T 5 I i PRP
T 6 can can MD
T 7 create create VB
T 8 a a DT
T 9 new new JJ
T 10 account account NN
T 11 . . .
D 0 case 3 1
D 1 det 3 2
D 2 nmod:as 7 3
D 3 punct 7 4
D 4 nsubj 7 5
D 5 aux 7 6
D 6 root 0 7
D 7 det 10 8
D 8 amod 10 9
D 9 dobj 7 10
D 10 punct 7 11
";

    fn load(text: &str) -> ParsedDocument {
        parse_native(text, &LabelNormalizer::default()).unwrap()
    }

    #[test]
    fn previous_subject() {
        let r = resolve_pronouns(&load(LOGIN), &Lexicon::default());
        assert_eq!(r.doc.sentences[1].tokens[0].lemma, "user");
        assert!(r.unresolved.is_empty());
    }

    #[test]
    fn speaker_of_the_story() {
        let r = resolve_pronouns(&load(VISITOR), &Lexicon::default());
        let t = &r.doc.sentences[0].tokens[4];
        assert_eq!(t.lemma, "visitor");
        assert!(is_resolved_pronoun(t, &Lexicon::default()));
    }

    #[test]
    fn no_antecedent_is_flagged() {
        let doc = load(LOGIN);
        let mut only_second = doc.clone();
        only_second.sentences.remove(0);
        let r = resolve_pronouns(&only_second, &Lexicon::default());
        assert_eq!(r.doc, only_second);
        assert_eq!(r.unresolved.len(), 1);
    }

    #[test]
    fn idempotent() {
        let lex = Lexicon::default();
        let once = resolve_pronouns(&load(LOGIN), &lex).doc;
        let twice = resolve_pronouns(&once, &lex).doc;
        assert_eq!(once, twice);
    }

    #[test]
    fn structure_untouched() {
        let doc = load(VISITOR);
        let r = resolve_pronouns(&doc, &Lexicon::default());
        assert_eq!(r.doc.sentences[0].deps, doc.sentences[0].deps);
        assert_eq!(
            r.doc.sentences[0].tokens.len(),
            doc.sentences[0].tokens.len()
        );
    }
}
