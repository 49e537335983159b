mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use common::mutants::{corpus_docs, lines_of, mutate, recheck, text_of, unsound_mutants};
use common::Gen;
use deduct_core::proof::{check_proof, parse_proof, LineKind, LineStatus, ProofDocument};
use deduct_core::rules::{system, ProofFormat};
use deduct_core::semantics::{validity, Validity};

#[test]
fn mutated_proofs_stay_sound() {
    match unsound_mutants(1_000, 7) {
        Ok(complete) => {
            println!("{complete} of 1000 mutants complete, all valid");
            assert!(complete > 0, "no mutant stayed complete");
        }
        Err(text) => panic!("unsound mutant accepted:\n{text}"),
    }
}

#[test]
fn unmutated_corpus_proofs_are_sound() {
    for doc in corpus_docs(true) {
        let r = check_proof(&doc).unwrap();
        if r.complete {
            let s = r.derived_sequent.unwrap();
            assert_eq!(validity(&s.antecedent, &s.succedent).unwrap(), Validity::Valid);
        }
    }
}

/// Statuses of the first `n` lines, leaving out Show lines, which are
/// decided by the lines under them.
fn settled(doc: &ProofDocument, text: &str, n: usize) -> Vec<Option<LineStatus>> {
    let r = recheck(doc, text);
    let d = parse_proof(doc.format, &doc.system, &doc.language, text);
    r.lines
        .iter()
        .zip(&d.lines)
        .take(n)
        .map(|(f, l)| (l.kind != LineKind::Show).then_some(f.status))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn appending_lines_keeps_earlier_feedback(seed in any::<u64>()) {
        let docs = corpus_docs(false);
        let mut rng = StdRng::seed_from_u64(seed);
        let mut g = Gen::new(seed, false);
        let doc = docs.choose(&mut rng).unwrap();
        let sys = system(&doc.system).unwrap();
        let names = sys.rule_names();
        let mut lines = lines_of(doc);
        if rng.gen_bool(0.5) {
            mutate(&mut lines, &mut rng, &mut g, &names);
        }
        let full = text_of(&lines);
        let k = rng.gen_range(0..=lines.len());
        let prefix = text_of(&lines[..k]);
        prop_assert_eq!(settled(doc, &prefix, k), settled(doc, &full, k));
    }
}

#[test]
fn fitch_statuses_never_depend_on_later_lines() {
    for doc in corpus_docs(false).into_iter().filter(|d| d.format == ProofFormat::Fitch) {
        let lines = lines_of(&doc);
        let full = recheck(&doc, &text_of(&lines));
        for k in 0..lines.len() {
            let r = recheck(&doc, &text_of(&lines[..k]));
            for (a, b) in r.lines.iter().zip(&full.lines) {
                assert_eq!(a.status, b.status);
            }
        }
    }
}
