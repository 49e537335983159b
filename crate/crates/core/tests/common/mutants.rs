use std::fs;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use super::Gen;
use deduct_core::notation::{print, Notation};
use deduct_core::proof::{check_proof, load_proof, parse_proof, LineKind, ProofDocument, ProofReport};
use deduct_core::rules::system;
use deduct_core::semantics::{validity, Validity};

pub fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/corpus")
}

/// Proof files of one corpus directory, sorted, goldens left out.
pub fn corpus_files(dir: &str) -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = fs::read_dir(corpus_root().join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e != "expected"))
        .collect();
    paths.sort();
    paths
}

#[derive(Debug, Clone)]
pub struct Line {
    pub depth: usize,
    pub show: bool,
    pub formula: String,
    pub rule: String,
    pub cites: String,
}

pub fn corpus_docs(prop_only: bool) -> Vec<ProofDocument> {
    let mut out = Vec::new();
    for dir in ["accept", "reject"] {
        for p in corpus_files(dir) {
            let (_, doc) = load_proof(&fs::read_to_string(p).unwrap(), None, None).unwrap();
            if !prop_only || doc.language.id() == "prop" {
                out.push(doc);
            }
        }
    }
    out
}

pub fn lines_of(doc: &ProofDocument) -> Vec<Line> {
    doc.lines
        .iter()
        .filter(|l| l.kind != LineKind::Separator)
        .map(|l| Line {
            depth: l.depth,
            show: l.kind == LineKind::Show,
            formula: l.formula_text.clone(),
            rule: l.rule.clone().unwrap_or_default(),
            cites: l.citations.iter().map(|c| c.text()).collect::<Vec<_>>().join(","),
        })
        .collect()
}

pub fn text_of(lines: &[Line]) -> String {
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let show = if l.show { "Show " } else { "" };
            let just = if l.rule.is_empty() { String::new() } else { format!(" :{} {}", l.rule, l.cites) };
            format!("{}.{}{show}{}{}", i + 1, " ".repeat(l.depth + 1), l.formula, just.trim_end())
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn mutate(lines: &mut Vec<Line>, rng: &mut StdRng, g: &mut Gen, rule_names: &[String]) {
    if lines.is_empty() {
        return;
    }
    let i = rng.gen_range(0..lines.len());
    match rng.gen_range(0..9) {
        0 => lines[i].depth = (lines[i].depth + 1).min(4),
        1 => lines[i].depth = lines[i].depth.saturating_sub(1),
        2 => {
            let n = lines.len();
            lines[i].cites = (0..rng.gen_range(1..=2))
                .map(|_| rng.gen_range(1..=n).to_string())
                .collect::<Vec<_>>()
                .join(",");
        }
        3 => {
            let n = lines.len();
            let m = rng.gen_range(1..=n);
            lines[i].cites = format!("{m}-{}", rng.gen_range(m..=n));
        }
        4 => lines[i].rule = rule_names.choose(rng).unwrap().clone(),
        5 => lines[i].formula = print(&g.formula(3), Notation::ASCII),
        6 => {
            let j = rng.gen_range(0..lines.len());
            lines[i].formula = lines[j].formula.clone();
        }
        7 => {
            lines.remove(i);
        }
        _ => {
            let j = rng.gen_range(0..lines.len());
            lines.swap(i, j);
        }
    }
}

pub fn recheck(doc: &ProofDocument, text: &str) -> ProofReport {
    let sys = system(&doc.system).unwrap();
    let mut d = parse_proof(doc.format, &doc.system, &sys.language, text);
    d.goal = None;
    check_proof(&d).unwrap()
}

/// Mutates `n` propositional corpus proofs (one to three edits each) and
/// checks every complete mutant against truth tables. Returns the number
/// of complete mutants, or the text of the first unsound one.
pub fn unsound_mutants(n: usize, seed: u64) -> Result<usize, String> {
    let docs = corpus_docs(true);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut g = Gen::new(seed ^ 0xa5a5, false);
    g.letters = 4;
    let mut complete = 0;
    for k in 0..n {
        let doc = &docs[k % docs.len()];
        let sys = system(&doc.system).unwrap();
        let mut names = sys.rule_names();
        names.extend(sys.aliases.keys().cloned());
        names.extend(["PR", "AS", "ACD", "AID", "As"].map(String::from));
        let mut lines = lines_of(doc);
        for _ in 0..rng.gen_range(1..=3) {
            mutate(&mut lines, &mut rng, &mut g, &names);
        }
        let text = text_of(&lines);
        let report = recheck(doc, &text);
        if report.complete {
            complete += 1;
            let s = report.derived_sequent.unwrap();
            if validity(&s.antecedent, &s.succedent).unwrap() != Validity::Valid {
                return Err(text);
            }
        }
    }
    Ok(complete)
}
