#![allow(dead_code)]

pub mod mutants;
pub mod oracle;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use deduct_core::syntax::{LexicalItem, Term};

pub const VARS: &[&str] = &["x", "y", "z"];

/// Random formulas and terms over a fixed signature: sentence letters
/// `P Q R S P_1 P_2`, predicates `F/1 G/2`, constants `a b c`, functions
/// `f/1 g/2`.
pub struct Gen {
    pub rng: StdRng,
    pub fol: bool,
    pub letters: usize,
}

pub fn app(head: LexicalItem, args: Vec<Term>) -> Term {
    Term::apply_all(Term::leaf(head), args).unwrap()
}

pub fn quantify(all: bool, var: &str, body: &Term) -> Term {
    let q = if all { LexicalItem::all() } else { LexicalItem::some() };
    app(q, vec![body.abstract_over(&LexicalItem::variable(var), var)])
}

pub fn letter(k: usize) -> LexicalItem {
    match k {
        0..=3 => LexicalItem::letter(['P', 'Q', 'R', 'S'][k]),
        n => LexicalItem::sentence(n as u32 - 3),
    }
}

impl Gen {
    pub fn new(seed: u64, fol: bool) -> Self {
        Gen {
            rng: StdRng::seed_from_u64(seed),
            fol,
            letters: 6,
        }
    }

    pub fn sentence(&mut self) -> Term {
        let k = self.rng.gen_range(0..self.letters);
        Term::leaf(letter(k))
    }

    pub fn term(&mut self, depth: usize, scope: &[&'static str]) -> Term {
        let leafy = depth <= 1 || self.rng.gen_bool(0.5);
        if leafy {
            if !scope.is_empty() && self.rng.gen_bool(0.5) {
                let v = scope[self.rng.gen_range(0..scope.len())];
                return Term::leaf(LexicalItem::variable(v));
            }
            let c = ["a", "b", "c"][self.rng.gen_range(0..3)];
            return Term::leaf(LexicalItem::constant(c));
        }
        if self.rng.gen_bool(0.6) {
            let t = self.term(depth - 1, scope);
            app(LexicalItem::function('f', 1), vec![t])
        } else {
            let (s, t) = (self.term(depth - 1, scope), self.term(depth - 1, scope));
            app(LexicalItem::function('g', 2), vec![s, t])
        }
    }

    fn atom(&mut self, depth: usize, scope: &[&'static str]) -> Term {
        if !self.fol || self.rng.gen_bool(0.3) {
            return self.sentence();
        }
        let td = depth.clamp(1, 3);
        if self.rng.gen_bool(0.6) {
            let t = self.term(td, scope);
            app(LexicalItem::predicate('F', 1), vec![t])
        } else {
            let (s, t) = (self.term(td, scope), self.term(td, scope));
            app(LexicalItem::predicate('G', 2), vec![s, t])
        }
    }

    /// A formula of height at most `depth`.
    pub fn formula(&mut self, depth: usize) -> Term {
        self.formula_in(depth, &mut Vec::new())
    }

    pub fn formula_in(&mut self, depth: usize, scope: &mut Vec<&'static str>) -> Term {
        if depth <= 1 || self.rng.gen_bool(0.2) {
            return self.atom(depth, scope);
        }
        let choices = if self.fol { 7 } else { 5 };
        match self.rng.gen_range(0..choices) {
            0 => {
                let a = self.formula_in(depth - 1, scope);
                app(LexicalItem::neg(), vec![a])
            }
            k @ 1..=4 => {
                let c = [LexicalItem::and(), LexicalItem::or(), LexicalItem::if_(), LexicalItem::iff()][k - 1].clone();
                let a = self.formula_in(depth - 1, scope);
                let b = self.formula_in(depth - 1, scope);
                app(c, vec![a, b])
            }
            k => {
                let v = VARS[self.rng.gen_range(0..VARS.len())];
                scope.push(v);
                let body = self.formula_in(depth - 1, scope);
                scope.pop();
                quantify(k == 5, v, &body)
            }
        }
    }
}
