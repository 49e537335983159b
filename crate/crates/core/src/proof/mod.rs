//! Proof documents in the Fitch, Montague and Hardegree layouts, line-by-line
//! checking, and derived rules.

mod check;
mod document;
mod file;
mod render;

use thiserror::Error;

use crate::lambda::replace_leaves;
use crate::rules::{system, Rule, RuleError, Sequent, System};
use crate::syntax::{LexicalItem, Term};

pub use check::{check_proof_in, CheckOptions, LineFeedback, LineStatus, ProofReport};
pub use document::{parse_proof, Citation, LineKind, LineParseError, ProofDocument, ProofLine};
pub use file::{load_proof, parse_proof_file, ProofFile};
pub use render::feedback_text;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
    #[error("unknown proof format `{0}`")]
    UnknownFormat(String),
    #[error("the proof is not complete")]
    IncompleteProof,
    #[error("malformed proof file: {0}")]
    MalformedFile(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Checks `doc` against the built-in system it names.
pub fn check_proof(doc: &ProofDocument) -> Result<ProofReport, ProofError> {
    let sys = system(&doc.system).ok_or_else(|| ProofError::UnknownSystem(doc.system.clone()))?;
    Ok(check_proof_in(doc, &sys, &CheckOptions::default()))
}

fn generalize(t: &Term, letters: &[LexicalItem]) -> Term {
    replace_leaves(t, &|item| {
        letters
            .iter()
            .position(|l| l == item)
            .map(|k| Term::leaf(LexicalItem::phi(k as u32 + 1, 0)))
    })
}

/// Turns a complete proof into a rule: one premise `Gi |- pi` per premise
/// line, conclusion `G1, .., Gn |- c`, with sentence letters replaced by
/// `phi1, phi2, ..` in order of first occurrence. The rule is registered
/// with `sys`.
pub fn derive_rule(doc: &ProofDocument, sys: &System, name: &str) -> Result<Rule, ProofError> {
    let report = check_proof_in(doc, sys, &CheckOptions::default());
    let derived = match report.derived_sequent {
        Some(s) if report.complete => s,
        _ => return Err(ProofError::IncompleteProof),
    };
    let mut letters: Vec<LexicalItem> = Vec::new();
    for f in derived.antecedent.iter().chain([&derived.succedent]) {
        f.visit_leaves(&mut |item| {
            if matches!(item, LexicalItem::Sentence(_)) && !letters.contains(item) {
                letters.push(item.clone());
            }
        });
    }
    let premises: Vec<Sequent> = derived
        .antecedent
        .iter()
        .enumerate()
        .map(|(k, p)| Sequent {
            contexts: vec![k as u32 + 1],
            antecedent: Vec::new(),
            succedent: generalize(p, &letters),
        })
        .collect();
    let conclusion = Sequent {
        contexts: (1..=premises.len() as u32).collect(),
        antecedent: Vec::new(),
        succedent: generalize(&derived.succedent, &letters),
    };
    let rule = Rule::new(name, premises, conclusion, Vec::new())?;
    sys.register_derived(rule.clone());
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::Notation;
    use crate::rules::ProofFormat;
    use crate::syntax::Language;

    fn check(format: ProofFormat, sys: &str, text: &str) -> ProofReport {
        let s = system(sys).unwrap();
        let doc = parse_proof(format, sys, &s.language, text);
        check_proof_in(&doc, &s, &CheckOptions::default())
    }

    fn statuses(r: &ProofReport) -> Vec<LineStatus> {
        r.lines.iter().map(|l| l.status).collect()
    }

    const CURRYING: &str = "1. (P/\\Q)->R :PR\n2.  P :AS\n3.   Q :AS\n4.   P/\\Q :&I 2,3\n5.   R :->E 1,4\n6.  Q->R :->I 3-5\n7. P->(Q->R) :->I 2-6";

    #[test]
    fn fitch_currying() {
        let r = check(ProofFormat::Fitch, "prop-fitch", CURRYING);
        assert!(statuses(&r).iter().all(|s| *s == LineStatus::Correct), "{}", feedback_text(&r));
        assert!(r.complete);
        assert_eq!(
            r.derived_sequent.unwrap().display(Notation::ASCII),
            "P /\\ Q -> R |- P -> Q -> R"
        );
    }

    #[test]
    fn local_error() {
        let r = check(ProofFormat::Fitch, "prop-fitch", &CURRYING.replace("1,4", "1,3"));
        let s = statuses(&r);
        assert_eq!(s[4], LineStatus::RuleMismatch);
        assert!(s.iter().enumerate().all(|(i, s)| i == 4 || *s == LineStatus::Correct));
        assert!(!r.complete);
    }

    #[test]
    fn closed_subproof_is_inaccessible() {
        let text = "1. (P/\\Q)->R :PR\n2.  P :AS\n3.   Q :AS\n4.   P/\\Q :&I 2,3\n5.   R :->E 1,4\n6.  Q->R :->I 3-5\n7.  Q :R 3";
        let r = check(ProofFormat::Fitch, "prop-fitch", text);
        assert_eq!(r.lines[6].status, LineStatus::InaccessibleLine);
    }

    #[test]
    fn montague_currying() {
        let text = "1. (P/\\Q)->R :PR\n2. Show P->(Q->R) :CD\n3.  P :ACD\n4.  Show Q->R :CD\n5.   Q :ACD\n6.   P/\\Q :ADJ 3,5\n7.   R :MP 1,6";
        let r = check(ProofFormat::Montague, "prop-montague", text);
        assert!(r.complete, "{}", feedback_text(&r));
        assert_eq!(
            r.derived_sequent.unwrap().display(Notation::ASCII),
            "P /\\ Q -> R |- P -> Q -> R"
        );
    }

    #[test]
    fn hardegree_currying() {
        let text = "1. (P/\\Q)->R :PR\n2. Show P->(Q->R) :CD\n3.  P :As\n4.  Show Q->R :CD\n5.   Q :As\n6.   P/\\Q :&I 3,5\n7.   R :->O 1,6";
        let r = check(ProofFormat::Hardegree, "prop-hardegree", text);
        assert!(r.complete, "{}", feedback_text(&r));
    }

    #[test]
    fn undischarged_show() {
        let text = "1. P :PR\n2. Show P->Q :CD\n3.  P :ACD";
        let r = check(ProofFormat::Montague, "prop-montague", text);
        assert_eq!(r.lines[1].status, LineStatus::IncompleteSubproof);
        assert!(!r.complete);
    }

    #[test]
    fn russell() {
        let text = "1.  EyAx(F(x,y)<->~F(x,x)) :AS\n2.   Ax(F(x,a)<->~F(x,x)) :AS\n3.   F(a,a)<->~F(a,a) :UI 2\n4.    F(a,a) :AS\n5.    ~F(a,a) :<->E 3,4\n6.    F(a,a)/\\~F(a,a) :&I 4,5\n7.   ~F(a,a) :~I 4-6\n8.   F(a,a) :<->E 3,7\n9.   EyAx(F(x,y)<->~F(x,x)) /\\ ~EyAx(F(x,y)<->~F(x,x)) :~E 8,7\n10.  EyAx(F(x,y)<->~F(x,x)) /\\ ~EyAx(F(x,y)<->~F(x,x)) :EE 1,2-9\n11. ~EyAx(F(x,y)<->~F(x,x)) :~I 1-10";
        let r = check(ProofFormat::Fitch, "fol-fitch", text);
        assert!(r.complete, "{}", feedback_text(&r));
    }

    #[test]
    fn derived_rule_from_currying() {
        let sys = system("prop-fitch").unwrap();
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &sys.language, CURRYING);
        let rule = derive_rule(&doc, &sys, "Curry").unwrap();
        assert_eq!(
            rule.schema(Notation::ASCII),
            "G1 |- phi1 /\\ phi2 -> phi3 => G1 |- phi1 -> phi2 -> phi3"
        );
        let use_it = "1. (S/\\P_1)->Q :PR\n2. S->(P_1->Q) :Curry 1";
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &sys.language, use_it);
        assert!(check_proof_in(&doc, &sys, &CheckOptions::default()).complete);
    }

    #[test]
    fn derived_rule_edge_cases() {
        let sys = system("prop-fitch").unwrap();
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), "1. P :PR");
        let rule = derive_rule(&doc, &sys, "Same").unwrap();
        assert_eq!(rule.schema(Notation::ASCII), "G1 |- phi1 => G1 |- phi1");
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), "1. P :PR\n2. Q :R 1");
        assert_eq!(derive_rule(&doc, &sys, "Bad"), Err(ProofError::IncompleteProof));
    }

    #[test]
    fn eigenvariable_violation() {
        let text = "1. F(a) :PR\n2. AxF(x) :UG 1";
        let r = check(ProofFormat::Fitch, "fol-fitch", text);
        assert_eq!(r.lines[1].status, LineStatus::EigenvariableViolation);
    }

    #[test]
    fn unknown_rule_and_priority() {
        let r = check(ProofFormat::Fitch, "prop-fitch", "1. P :PR\n2. P :XYZ 7");
        assert_eq!(r.lines[1].status, LineStatus::NoSuchRule);
        let r = check(ProofFormat::Fitch, "prop-fitch", "1. P :PR\n2. Q :MP 7");
        assert_eq!(r.lines[1].status, LineStatus::InaccessibleLine);
    }

    #[test]
    fn empty_document() {
        let r = check(ProofFormat::Fitch, "prop-fitch", "");
        assert!(!r.complete);
        assert!(r.lines.is_empty());
    }
}
