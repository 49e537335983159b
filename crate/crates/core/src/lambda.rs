//! Capture-avoiding substitution, beta-normalization, long eta-expansion
//! and the schematic-variable queries the unifier is written against.

use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{LexicalItem, SimpleType, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("binding for {item:?} has type {got}, expected {expected}")]
    TypeMismatch {
        item: LexicalItem,
        expected: SimpleType,
        got: SimpleType,
    },
    #[error("{0:?} is not a schematic item")]
    NotSchematic(LexicalItem),
    #[error("binding for {0:?} is not closed")]
    OpenImage(LexicalItem),
}

/// A finite mapping from schematic items to closed terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<LexicalItem, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a binding after checking that it is type-correct and closed.
    pub fn bind(&mut self, item: LexicalItem, image: Term) -> Result<(), SubstError> {
        if !item.is_schematic() {
            return Err(SubstError::NotSchematic(item));
        }
        let expected = item.ty();
        if image.ty() != &expected {
            return Err(SubstError::TypeMismatch {
                item,
                expected,
                got: image.ty().clone(),
            });
        }
        if image.has_loose_bound() {
            return Err(SubstError::OpenImage(item));
        }
        self.map.insert(item, image);
        Ok(())
    }

    pub fn with(mut self, item: LexicalItem, image: Term) -> Result<Self, SubstError> {
        self.bind(item, image)?;
        Ok(self)
    }

    pub(crate) fn insert_unchecked(&mut self, item: LexicalItem, image: Term) {
        self.map.insert(item, image);
    }

    pub fn get(&self, item: &LexicalItem) -> Option<&Term> {
        self.map.get(item)
    }

    pub fn contains(&self, item: &LexicalItem) -> bool {
        self.map.contains_key(item)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, LexicalItem, Term> {
        self.map.iter()
    }

    pub fn remove(&mut self, item: &LexicalItem) -> Option<Term> {
        self.map.remove(item)
    }

    /// Keeps only the bindings whose key satisfies `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&LexicalItem) -> bool) {
        self.map.retain(|k, _| keep(k));
    }
}

impl<'a> IntoIterator for &'a Substitution {
    type Item = (&'a LexicalItem, &'a Term);
    type IntoIter = btree_map::Iter<'a, LexicalItem, Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.map.iter()
    }
}

/// Simultaneous replacement of schematic leaves. Images are closed, so no
/// object-language binder can capture anything.
pub fn substitute(t: &Term, bindings: &Substitution) -> Result<Term, SubstError> {
    for (item, image) in bindings {
        if image.ty() != &item.ty() {
            return Err(SubstError::TypeMismatch {
                item: item.clone(),
                expected: item.ty(),
                got: image.ty().clone(),
            });
        }
    }
    Ok(replace_leaves(t, &|i| bindings.get(i).cloned()))
}

/// Replaces leaves for which `f` returns an image. Images must be closed.
pub(crate) fn replace_leaves(t: &Term, f: &impl Fn(&LexicalItem) -> Option<Term>) -> Term {
    match t.kind() {
        TermKind::Leaf(i) => f(i).unwrap_or_else(|| t.clone()),
        TermKind::Bound(_) => t.clone(),
        TermKind::App(a, b) => {
            let (a2, b2) = (replace_leaves(a, f), replace_leaves(b, f));
            Term::app_unchecked(a2, b2)
        }
        TermKind::Lam {
            bound_hint,
            bound_ty,
            body,
        } => Term::lam(bound_hint, bound_ty.clone(), replace_leaves(body, f)),
    }
}

/// Adds `by` to every bound index `>= cutoff`.
pub(crate) fn shift(t: &Term, by: i64, cutoff: u32) -> Term {
    if by == 0 {
        return t.clone();
    }
    match t.kind() {
        TermKind::Leaf(_) => t.clone(),
        TermKind::Bound(k) if *k >= cutoff => {
            Term::bound((*k as i64 + by) as u32, t.ty().clone())
        }
        TermKind::Bound(_) => t.clone(),
        TermKind::App(a, b) => Term::app_unchecked(shift(a, by, cutoff), shift(b, by, cutoff)),
        TermKind::Lam {
            bound_hint,
            bound_ty,
            body,
        } => Term::lam(bound_hint, bound_ty.clone(), shift(body, by, cutoff + 1)),
    }
}

/// Substitutes `arg` for index 0 in the body of a binder.
pub(crate) fn instantiate(body: &Term, arg: &Term) -> Term {
    fn go(t: &Term, depth: u32, arg: &Term) -> Term {
        match t.kind() {
            TermKind::Leaf(_) => t.clone(),
            TermKind::Bound(k) if *k == depth => shift(arg, depth as i64, 0),
            TermKind::Bound(k) if *k > depth => Term::bound(k - 1, t.ty().clone()),
            TermKind::Bound(_) => t.clone(),
            TermKind::App(a, b) => Term::app_unchecked(go(a, depth, arg), go(b, depth, arg)),
            TermKind::Lam {
                bound_hint,
                bound_ty,
                body,
            } => Term::lam(bound_hint, bound_ty.clone(), go(body, depth + 1, arg)),
        }
    }
    go(body, 0, arg)
}

/// The body of a binder with its bound variable replaced by a variable
/// named after the binder's hint.
pub fn open_binder(t: &Term) -> Option<(String, Term)> {
    match t.kind() {
        TermKind::Lam { bound_hint, body, .. } => Some((
            bound_hint.clone(),
            instantiate(body, &Term::leaf(LexicalItem::variable(bound_hint))),
        )),
        _ => None,
    }
}

/// Beta-normal form, normal order. Terminates on every simply typed term.
pub fn beta_normalize(t: &Term) -> Term {
    match t.kind() {
        TermKind::Leaf(_) | TermKind::Bound(_) => t.clone(),
        TermKind::Lam {
            bound_hint,
            bound_ty,
            body,
        } => Term::lam(bound_hint, bound_ty.clone(), beta_normalize(body)),
        TermKind::App(f, x) => {
            let f = beta_normalize(f);
            if let TermKind::Lam { body, .. } = f.kind() {
                beta_normalize(&instantiate(body, x))
            } else {
                Term::app_unchecked(f, beta_normalize(x))
            }
        }
    }
}

/// Long eta-normal form of the beta-normal form of `t`: every subterm of
/// arrow type is a lambda whose body is fully applied.
pub fn eta_expand(t: &Term) -> Term {
    eta_long(&beta_normalize(t))
}

pub(crate) fn binder_hint(ty: &SimpleType, depth: usize) -> String {
    match ty {
        SimpleType::Base(_) => ["x", "y", "z", "w", "u", "v"][depth % 6].to_string(),
        SimpleType::Arrow(..) => ["p", "q", "r", "s"][depth % 4].to_string(),
    }
}

// Input is beta-normal.
fn eta_long(t: &Term) -> Term {
    match t.kind() {
        TermKind::Lam {
            bound_hint,
            bound_ty,
            body,
        } => Term::lam(bound_hint, bound_ty.clone(), eta_long(body)),
        _ => {
            let (head, args) = t.spine();
            let args: Vec<Term> = args.into_iter().map(eta_long).collect();
            expand(Term::apply_unchecked(head.clone(), args), 0)
        }
    }
}

// Wraps a fully eta-long application of arrow type in binders.
fn expand(t: Term, depth: usize) -> Term {
    match t.ty().clone() {
        SimpleType::Base(_) => t,
        SimpleType::Arrow(dom, _) => {
            let dom = dom.as_ref().clone();
            let var = eta_long(&Term::bound(0, dom.clone()));
            let applied = Term::app_unchecked(shift(&t, 1, 0), var);
            Term::lam(&binder_hint(&dom, depth), dom, expand(applied, depth + 1))
        }
    }
}

/// Identity up to renaming of bound variables.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    a == b
}

/// Schematic leaves occurring in `t`.
pub fn schematic_vars(t: &Term) -> BTreeSet<LexicalItem> {
    let mut out = BTreeSet::new();
    t.visit_leaves(&mut |i| {
        if i.is_schematic() {
            out.insert(i.clone());
        }
    });
    out
}

/// betaeta-long normal form, the discipline of every unification-facing term.
pub fn normalize(t: &Term) -> Term {
    eta_expand(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::mk_app;

    fn leaf(i: LexicalItem) -> Term {
        Term::leaf(i)
    }
    fn l(c: char) -> Term {
        leaf(LexicalItem::letter(c))
    }
    fn bin(c: LexicalItem, a: Term, b: Term) -> Term {
        Term::apply_all(leaf(c), [a, b]).unwrap()
    }
    fn pred(c: char, args: Vec<Term>) -> Term {
        Term::apply_all(leaf(LexicalItem::predicate(c, args.len() as u8)), args).unwrap()
    }
    fn fa() -> Term {
        mk_app(
            leaf(LexicalItem::function('f', 1)),
            leaf(LexicalItem::constant("a")),
        )
        .unwrap()
    }

    #[test]
    fn open_binder_names_the_variable() {
        let x = LexicalItem::variable("x");
        let body = pred('F', vec![leaf(x.clone())]);
        let lam = body.abstract_over(&x, "x");
        assert_eq!(open_binder(&lam), Some(("x".to_string(), body)));
        assert_eq!(open_binder(&l('P')), None);
    }

    #[test]
    fn substitute_mp_schema() {
        let phi = LexicalItem::phi(1, 0);
        let psi = LexicalItem::phi(2, 0);
        let schema = bin(LexicalItem::if_(), leaf(phi.clone()), leaf(psi.clone()));
        let pr = bin(LexicalItem::and(), l('P'), l('R'));
        let qs = bin(LexicalItem::or(), l('Q'), l('S'));
        let theta = Substitution::new()
            .with(phi, pr.clone())
            .unwrap()
            .with(psi, qs.clone())
            .unwrap();
        let out = substitute(&schema, &theta).unwrap();
        assert_eq!(out, bin(LexicalItem::if_(), pr, qs));
    }

    #[test]
    fn empty_substitution_is_identity() {
        assert_eq!(substitute(&l('P'), &Substitution::new()).unwrap(), l('P'));
    }

    #[test]
    fn ill_typed_binding_rejected() {
        let err = Substitution::new().with(LexicalItem::tau(1), l('P'));
        assert!(matches!(err, Err(SubstError::TypeMismatch { .. })));
    }

    fn r_and_q_lambda() -> Term {
        let x = LexicalItem::variable("y");
        let xt = leaf(x.clone());
        bin(
            LexicalItem::and(),
            pred('R', vec![xt.clone()]),
            pred('Q', vec![xt]),
        )
        .abstract_over(&x, "y")
    }

    #[test]
    fn substitute_under_quantifier_then_normalize() {
        let phi = LexicalItem::phi(1, 1);
        let x = LexicalItem::variable("x");
        let body = mk_app(leaf(phi.clone()), leaf(x.clone())).unwrap();
        let schema = mk_app(leaf(LexicalItem::all()), body.abstract_over(&x, "x")).unwrap();
        let theta = Substitution::new().with(phi, r_and_q_lambda()).unwrap();
        let out = beta_normalize(&substitute(&schema, &theta).unwrap());
        let xt = leaf(x.clone());
        let expected = mk_app(
            leaf(LexicalItem::all()),
            bin(
                LexicalItem::and(),
                pred('R', vec![xt.clone()]),
                pred('Q', vec![xt]),
            )
            .abstract_over(&x, "x"),
        )
        .unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn beta_examples() {
        let redex = mk_app(r_and_q_lambda(), fa()).unwrap();
        let expected = bin(
            LexicalItem::and(),
            pred('R', vec![fa()]),
            pred('Q', vec![fa()]),
        );
        assert_eq!(beta_normalize(&redex), expected);
        assert_eq!(beta_normalize(&l('P')), l('P'));
        let k = Term::lam("x", SimpleType::trm(), l('P'));
        let app = mk_app(k, leaf(LexicalItem::constant("a"))).unwrap();
        assert_eq!(beta_normalize(&app), l('P'));
    }

    #[test]
    fn eta_examples() {
        let neg = leaf(LexicalItem::neg());
        let expected = Term::lam(
            "x",
            SimpleType::form(),
            mk_app(neg.clone(), Term::bound(0, SimpleType::form())).unwrap(),
        );
        assert_eq!(eta_expand(&neg), expected);
        assert_eq!(eta_expand(&l('P')), l('P'));
    }

    #[test]
    fn eta_expand_quantifier() {
        // λp. All(λx. p x)
        let all = leaf(LexicalItem::all());
        let pty = SimpleType::arrow(SimpleType::trm(), SimpleType::form());
        let inner = Term::lam(
            "x",
            SimpleType::trm(),
            mk_app(Term::bound(1, pty.clone()), Term::bound(0, SimpleType::trm())).unwrap(),
        );
        let expected = Term::lam("p", pty.clone(), mk_app(all.clone(), inner).unwrap());
        let got = eta_expand(&all);
        assert_eq!(got, expected);
        assert_eq!(got.ty(), all.ty());
        // Applied to a predicate it reduces back to All(F).
        let f = leaf(LexicalItem::predicate('F', 1));
        let applied = beta_normalize(&mk_app(got, f.clone()).unwrap());
        assert_eq!(applied, eta_expand(&mk_app(all, f).unwrap()));
    }

    #[test]
    fn alpha_examples() {
        let x = LexicalItem::variable("x");
        let y = LexicalItem::variable("y");
        let rx = pred('R', vec![leaf(x.clone())]);
        let ry = pred('R', vec![leaf(y.clone())]);
        let all = |b: Term| mk_app(leaf(LexicalItem::all()), b).unwrap();
        assert!(alpha_equal(&all(rx.abstract_over(&x, "x")), &all(ry.abstract_over(&y, "y"))));
        assert!(!alpha_equal(
            &bin(LexicalItem::and(), l('P'), l('Q')),
            &bin(LexicalItem::and(), l('Q'), l('P'))
        ));
        // λx.λy.F(x,y) vs λy.λx.F(y,x)
        let fxy = pred('F', vec![leaf(x.clone()), leaf(y.clone())]);
        let fyx = pred('F', vec![leaf(y.clone()), leaf(x.clone())]);
        let a = fxy.abstract_over(&y, "y").abstract_over(&x, "x");
        let b = fyx.abstract_over(&x, "x").abstract_over(&y, "y");
        assert!(alpha_equal(&a, &b));
        // Nameless-form oracle: outer binder is index 1, inner is index 0.
        let nameless = Term::lam(
            "_",
            SimpleType::trm(),
            Term::lam(
                "_",
                SimpleType::trm(),
                pred(
                    'F',
                    vec![
                        Term::bound(1, SimpleType::trm()),
                        Term::bound(0, SimpleType::trm()),
                    ],
                ),
            ),
        );
        assert!(alpha_equal(&a, &nameless) && alpha_equal(&b, &nameless));
    }

    #[test]
    fn schematic_vars_examples() {
        let phi = LexicalItem::phi(1, 0);
        let psi = LexicalItem::phi(2, 0);
        let t = bin(LexicalItem::if_(), leaf(phi.clone()), leaf(psi.clone()));
        assert_eq!(schematic_vars(&t), BTreeSet::from([phi, psi]));
        assert!(schematic_vars(&bin(LexicalItem::and(), l('P'), l('R'))).is_empty());
        let phi1 = LexicalItem::phi(1, 1);
        let tau = LexicalItem::tau(1);
        let t = mk_app(leaf(phi1.clone()), leaf(tau.clone())).unwrap();
        assert_eq!(schematic_vars(&t), BTreeSet::from([phi1, tau]));
    }

    #[test]
    fn no_capture_of_free_variable() {
        // ∀x φ(x) with φ ↦ λy. F(x0, y): the free x0 stays free.
        let phi = LexicalItem::phi(1, 1);
        let x = LexicalItem::variable("x");
        let x0 = LexicalItem::variable("x");
        let y = LexicalItem::variable("y");
        let body = mk_app(leaf(phi.clone()), leaf(x.clone())).unwrap();
        let schema = mk_app(leaf(LexicalItem::all()), body.abstract_over(&x, "x")).unwrap();
        let image = pred('F', vec![leaf(x0.clone()), leaf(y.clone())]).abstract_over(&y, "y");
        let theta = Substitution::new().with(phi, image).unwrap();
        let out = beta_normalize(&substitute(&schema, &theta).unwrap());
        // The result is All(λ. F(x0, #0)), not All(λ. F(#0, #0)).
        let (_, args) = out.spine();
        let TermKind::Lam { body, .. } = args[0].kind() else {
            panic!()
        };
        let (_, fargs) = body.spine();
        assert_eq!(fargs[0].as_leaf(), Some(&x0));
        assert!(matches!(fargs[1].kind(), TermKind::Bound(0)));
    }
}
