use std::collections::{BTreeMap, HashSet};

use rand::Rng;

use super::{app, Gen};
use deduct_core::lambda::Substitution;
use deduct_core::syntax::{Category, LexicalItem, Term, TermKind};
use deduct_core::unify::{apply, match_pattern, SearchBudget};

pub type Path = Vec<u8>;
pub type Solution = BTreeMap<LexicalItem, Term>;

/// Base-typed subterm positions: (path, binders above, subterm).
pub fn positions(t: &Term) -> Vec<(Path, usize, Term)> {
    fn go(t: &Term, path: &mut Path, depth: usize, out: &mut Vec<(Path, usize, Term)>) {
        if t.ty().is_base() {
            out.push((path.clone(), depth, t.clone()));
        }
        match t.kind() {
            TermKind::App(a, b) => {
                path.push(0);
                go(a, path, depth, out);
                path.pop();
                path.push(1);
                go(b, path, depth, out);
                path.pop();
            }
            TermKind::Lam { body, .. } => {
                path.push(2);
                go(body, path, depth + 1, out);
                path.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), 0, &mut out);
    out
}

pub fn replace_at(t: &Term, path: &[u8], new: &Term) -> Term {
    let Some((&step, rest)) = path.split_first() else {
        return new.clone();
    };
    match (t.kind(), step) {
        (TermKind::App(a, b), 0) => Term::app(replace_at(a, rest, new), b.clone()).unwrap(),
        (TermKind::App(a, b), 1) => Term::app(a.clone(), replace_at(b, rest, new)).unwrap(),
        (TermKind::Lam { bound_hint, bound_ty, body }, 2) => {
            Term::lam(bound_hint, bound_ty.clone(), replace_at(body, rest, new))
        }
        _ => unreachable!("path leaves the term"),
    }
}

/// Names each loose bound variable `_bK` so subterms can be compared
/// without index bookkeeping.
fn open(t: &Term, depth: u32) -> Term {
    match t.kind() {
        TermKind::Bound(i) if *i >= depth => Term::leaf(LexicalItem::variable(&format!("_b{}", i - depth))),
        TermKind::App(a, b) => Term::app(open(a, depth), open(b, depth)).unwrap(),
        TermKind::Lam { bound_hint, bound_ty, body } => {
            Term::lam(bound_hint, bound_ty.clone(), open(body, depth + 1))
        }
        _ => t.clone(),
    }
}

fn has_opened(t: &Term) -> bool {
    t.leaves()
        .iter()
        .any(|i| matches!(i, LexicalItem::Variable(v) if v.starts_with("_b")))
}

/// Every way of replacing a subset of the occurrences of `u` in `s`.
fn generalizations(s: &Term, u: &Term, hole: &Term, out: &mut HashSet<Term>) {
    let occurrences: Vec<Path> = positions(s)
        .into_iter()
        .filter(|(_, _, x)| x == u)
        .map(|(p, _, _)| p)
        .collect();
    let n = occurrences.len().min(10);
    for mask in 0u32..(1 << n) {
        let mut b = s.clone();
        for (k, p) in occurrences.iter().take(n).enumerate() {
            if mask & (1 << k) != 0 {
                b = replace_at(&b, p, hole);
            }
        }
        out.insert(b);
    }
}

pub fn oracle(pattern: &Term, ground: &Term, flexibles: &[LexicalItem]) -> HashSet<Solution> {
    let subterms: Vec<Term> = positions(ground).into_iter().map(|(_, _, t)| t).collect();
    let closed = |cat: Category| -> Vec<Term> {
        let set: HashSet<Term> = subterms
            .iter()
            .filter(|t| t.ty().target() == cat && !t.has_loose_bound())
            .cloned()
            .collect();
        set.into_iter().collect()
    };
    let hole_item = LexicalItem::variable("_hole");
    let hole = Term::leaf(hole_item.clone());
    let mut candidates: Vec<Vec<Option<Term>>> = Vec::new();
    for f in flexibles {
        let mut c: Vec<Option<Term>> = vec![None];
        match (f, f.ty().arity()) {
            (LexicalItem::Tau { .. }, _) => c.extend(closed(Category::Trm).into_iter().map(Some)),
            (_, 0) => c.extend(closed(Category::Form).into_iter().map(Some)),
            _ => {
                let mut bodies = HashSet::new();
                for s in subterms.iter().filter(|t| t.ty().target() == Category::Form) {
                    let s = open(s, 0);
                    bodies.insert(s.clone());
                    let us: HashSet<Term> = positions(&s)
                        .into_iter()
                        .map(|(_, _, t)| t)
                        .filter(|t| t.ty().target() == Category::Trm)
                        .collect();
                    for u in us {
                        generalizations(&s, &u, &hole, &mut bodies);
                    }
                }
                for b in bodies.into_iter().filter(|b| !has_opened(b)) {
                    c.push(Some(b.abstract_over(&hole_item, "x")));
                }
            }
        }
        candidates.push(c);
    }
    let mut solutions = HashSet::new();
    let mut choice = vec![0usize; flexibles.len()];
    'outer: loop {
        let mut theta = Substitution::new();
        let mut sol = Solution::new();
        for (k, f) in flexibles.iter().enumerate() {
            if let Some(img) = &candidates[k][choice[k]] {
                theta.bind(f.clone(), img.clone()).unwrap();
                sol.insert(f.clone(), img.clone());
            }
        }
        if apply(&theta, pattern).unwrap() == *ground {
            solutions.insert(sol);
        }
        for k in 0..choice.len() {
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    // A binding is redundant when the same solution without it works.
    let general = solutions.clone();
    solutions.retain(|s| {
        !s.keys().any(|k| {
            let mut smaller = s.clone();
            smaller.remove(k);
            general.contains(&smaller)
        })
    });
    solutions
}

fn phi(index: u32, arity: usize) -> LexicalItem {
    LexicalItem::phi(index, arity)
}

/// A pattern obtained by carving flexibles out of a ground formula (or out
/// of an unrelated one), with at most two flexibles.
pub fn problem(g: &mut Gen) -> (Term, Term, Vec<LexicalItem>) {
    let ground = g.formula(4);
    let mut pattern = if g.rng.gen_bool(0.2) { g.formula(4) } else { ground.clone() };
    let tau = LexicalItem::tau(1);
    let ops = g.rng.gen_range(1..=2);
    for k in 0..ops {
        let ps = positions(&pattern);
        let forms: Vec<_> = ps.iter().filter(|(_, _, t)| t.is_formula()).cloned().collect();
        let terms: Vec<_> = ps
            .iter()
            .filter(|(_, _, t)| t.ty().target() == Category::Trm && !t.has_loose_bound() && t.leaves().iter().all(|i| !i.is_schematic()))
            .cloned()
            .collect();
        match g.rng.gen_range(0..3) {
            0 if !terms.is_empty() => {
                let (p, _, _) = &terms[g.rng.gen_range(0..terms.len())];
                pattern = replace_at(&pattern, p, &Term::leaf(tau.clone()));
            }
            1 => {
                let (p, _, s) = &forms[g.rng.gen_range(0..forms.len())];
                if !s.has_loose_bound() {
                    pattern = replace_at(&pattern, p, &Term::leaf(phi(k + 1, 0)));
                }
            }
            _ => {
                let (p, _, s) = forms[g.rng.gen_range(0..forms.len())].clone();
                // Arguments come from the spine of `s`, outside any inner binder.
                let args: Vec<Term> = positions(&s)
                    .into_iter()
                    .filter(|(path, _, t)| t.ty().target() == Category::Trm && !path.contains(&2))
                    .map(|(_, _, t)| t)
                    .collect();
                if args.is_empty() {
                    continue;
                }
                let mut arg = args[g.rng.gen_range(0..args.len())].clone();
                if !arg.has_loose_bound() && g.rng.gen_bool(0.5) {
                    arg = Term::leaf(tau.clone());
                }
                pattern = replace_at(&pattern, &p, &app(phi(k + 1, 1), vec![arg]));
            }
        }
    }
    let mut flexibles: Vec<LexicalItem> = Vec::new();
    pattern.visit_leaves(&mut |i| {
        if i.is_schematic() && !flexibles.contains(i) {
            flexibles.push(i.clone());
        }
    });
    (pattern, ground, flexibles)
}

pub fn budget() -> SearchBudget {
    SearchBudget {
        max_depth: 12,
        max_nodes: 1_000_000,
        max_solutions: usize::MAX,
    }
}

pub fn unifier_solutions(pattern: &Term, ground: &Term, flexibles: &[LexicalItem]) -> HashSet<Solution> {
    let (sols, err) = match_pattern(pattern, ground, flexibles.iter().cloned(), budget())
        .unwrap()
        .collect_all();
    assert!(err.is_none(), "budget exhausted");
    sols.into_iter()
        .map(|s| s.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
        .collect()
}
