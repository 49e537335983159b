use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use super::lexicon::{LexicalItem, SentenceLetter};
use super::types::{Category, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch: expected {expected}, got {got}")]
    TypeMismatch { expected: SimpleType, got: SimpleType },
    #[error("cannot apply a term of base type {0}")]
    NotAFunction(SimpleType),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("atomic formula {0} has no parts")]
    AtomicFormula(SentenceLetter),
    #[error("term of type {0} is not a formula")]
    NotAFormula(SimpleType),
    #[error("term is not headed by a lexical item")]
    NotSpineForm,
}

/// A typed applicative tree over lexical items, with nameless binders.
///
/// Equality, hashing and ordering ignore the display hints on binders, so
/// `==` is alpha-equality.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    ty: SimpleType,
}

#[derive(Clone)]
pub enum TermKind {
    Leaf(LexicalItem),
    /// De Bruijn index; 0 is the innermost enclosing binder.
    Bound(u32),
    App(Term, Term),
    /// `bound_hint` is for display only.
    Lam {
        bound_hint: String,
        bound_ty: SimpleType,
        body: Term,
    },
}

impl Term {
    pub fn leaf(item: LexicalItem) -> Term {
        let ty = item.ty();
        Term(Arc::new(Node {
            kind: TermKind::Leaf(item),
            ty,
        }))
    }

    /// A bound-variable occurrence. Only meaningful under a binder of the
    /// same type; prefer [`Term::abstract_over`] when building binders.
    pub fn bound(index: u32, ty: SimpleType) -> Term {
        Term(Arc::new(Node {
            kind: TermKind::Bound(index),
            ty,
        }))
    }

    pub fn lam(bound_hint: &str, bound_ty: SimpleType, body: Term) -> Term {
        let ty = SimpleType::arrow(bound_ty.clone(), body.ty().clone());
        Term(Arc::new(Node {
            kind: TermKind::Lam {
                bound_hint: bound_hint.to_string(),
                bound_ty,
                body,
            },
            ty,
        }))
    }

    /// Checked application.
    pub fn app(f: Term, x: Term) -> Result<Term, TypeError> {
        match f.ty() {
            SimpleType::Arrow(dom, _) if dom.as_ref() == x.ty() => Ok(Term::app_unchecked(f, x)),
            SimpleType::Arrow(dom, _) => Err(TypeError::TypeMismatch {
                expected: dom.as_ref().clone(),
                got: x.ty().clone(),
            }),
            base => Err(TypeError::NotAFunction(base.clone())),
        }
    }

    /// Folds checked application over `args`.
    pub fn apply_all(head: Term, args: impl IntoIterator<Item = Term>) -> Result<Term, TypeError> {
        args.into_iter().try_fold(head, Term::app)
    }

    pub(crate) fn app_unchecked(f: Term, x: Term) -> Term {
        let ty = match f.ty() {
            SimpleType::Arrow(_, cod) => cod.as_ref().clone(),
            other => panic!("app_unchecked on non-function type {other}"),
        };
        Term(Arc::new(Node {
            kind: TermKind::App(f, x),
            ty,
        }))
    }

    pub(crate) fn apply_unchecked(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app_unchecked)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn ty(&self) -> &SimpleType {
        &self.0.ty
    }

    pub fn as_leaf(&self) -> Option<&LexicalItem> {
        match self.kind() {
            TermKind::Leaf(item) => Some(item),
            _ => None,
        }
    }

    pub fn is_formula(&self) -> bool {
        self.ty() == &SimpleType::Base(Category::Form)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let TermKind::App(f, x) = cur.kind() {
            args.push(x);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Replaces every occurrence of the leaf `item` with a variable bound by
    /// a new outermost binder, yielding `λhint. self[item := bound]`.
    pub fn abstract_over(&self, item: &LexicalItem, hint: &str) -> Term {
        fn go(t: &Term, item: &LexicalItem, depth: u32) -> Term {
            match t.kind() {
                TermKind::Leaf(i) if i == item => Term::bound(depth, t.ty().clone()),
                TermKind::Leaf(_) | TermKind::Bound(_) => t.clone(),
                TermKind::App(f, x) => {
                    Term::app_unchecked(go(f, item, depth), go(x, item, depth))
                }
                TermKind::Lam {
                    bound_hint,
                    bound_ty,
                    body,
                } => Term::lam(bound_hint, bound_ty.clone(), go(body, item, depth + 1)),
            }
        }
        Term::lam(hint, item.ty(), go(self, item, 0))
    }

    /// All leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&LexicalItem> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |i| out.push(i));
        out
    }

    pub fn visit_leaves<'a>(&'a self, f: &mut impl FnMut(&'a LexicalItem)) {
        match self.kind() {
            TermKind::Leaf(i) => f(i),
            TermKind::Bound(_) => {}
            TermKind::App(a, b) => {
                a.visit_leaves(f);
                b.visit_leaves(f);
            }
            TermKind::Lam { body, .. } => body.visit_leaves(f),
        }
    }

    pub fn contains_leaf(&self, item: &LexicalItem) -> bool {
        let mut found = false;
        self.visit_leaves(&mut |i| found |= i == item);
        found
    }

    /// True when some bound index escapes every enclosing binder in `self`.
    pub fn has_loose_bound(&self) -> bool {
        self.max_loose_bound().is_some()
    }

    /// Largest index `k - depth` over loose occurrences, if any.
    pub(crate) fn max_loose_bound(&self) -> Option<u32> {
        fn go(t: &Term, depth: u32) -> Option<u32> {
            match t.kind() {
                TermKind::Leaf(_) => None,
                TermKind::Bound(k) => (*k >= depth).then(|| k - depth),
                TermKind::App(a, b) => match (go(a, depth), go(b, depth)) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                },
                TermKind::Lam { body, .. } => go(body, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn size(&self) -> usize {
        match self.kind() {
            TermKind::Leaf(_) | TermKind::Bound(_) => 1,
            TermKind::App(a, b) => a.size() + b.size(),
            TermKind::Lam { body, .. } => 1 + body.size(),
        }
    }

    /// Every subterm, pre-order, including `self`. Subterms under binders
    /// may contain loose bound indices.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            out.push(t);
            match t.kind() {
                TermKind::Leaf(_) | TermKind::Bound(_) => {}
                TermKind::App(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                TermKind::Lam { body, .. } => go(body, out),
            }
        }
        go(self, &mut out);
        out
    }
}

/// Returns the main lexical item of a formula and its immediate parts.
pub fn decompose(t: &Term) -> Result<(LexicalItem, Vec<Term>), DecomposeError> {
    if !t.is_formula() {
        return Err(DecomposeError::NotAFormula(t.ty().clone()));
    }
    let (head, args) = t.spine();
    match head.kind() {
        TermKind::Leaf(LexicalItem::Sentence(s)) => Err(DecomposeError::AtomicFormula(*s)),
        TermKind::Leaf(item) => Ok((item.clone(), args.into_iter().cloned().collect())),
        _ => Err(DecomposeError::NotSpineForm),
    }
}

/// Checked application constructor.
pub fn mk_app(f: Term, x: Term) -> Result<Term, TypeError> {
    Term::app(f, x)
}

pub fn type_of(t: &Term) -> SimpleType {
    t.ty().clone()
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Leaf(a), TermKind::Leaf(b)) => a == b,
            (TermKind::Bound(a), TermKind::Bound(b)) => a == b && self.ty() == other.ty(),
            (TermKind::App(f1, x1), TermKind::App(f2, x2)) => f1 == f2 && x1 == x2,
            (
                TermKind::Lam {
                    bound_ty: t1,
                    body: b1,
                    ..
                },
                TermKind::Lam {
                    bound_ty: t2,
                    body: b2,
                    ..
                },
            ) => t1 == t2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.kind() {
            TermKind::Leaf(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            TermKind::Bound(k) => {
                1u8.hash(state);
                k.hash(state);
            }
            TermKind::App(f, x) => {
                2u8.hash(state);
                f.hash(state);
                x.hash(state);
            }
            TermKind::Lam { bound_ty, body, .. } => {
                3u8.hash(state);
                bound_ty.hash(state);
                body.hash(state);
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::notation::print_debug(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Term {
        Term::leaf(LexicalItem::letter('P'))
    }
    fn q() -> Term {
        Term::leaf(LexicalItem::letter('Q'))
    }

    #[test]
    fn negation_of_letter_is_formula() {
        let t = mk_app(Term::leaf(LexicalItem::neg()), p()).unwrap();
        assert_eq!(type_of(&t), SimpleType::form());
    }

    #[test]
    fn partial_application_of_binary_connective() {
        let t = mk_app(Term::leaf(LexicalItem::and()), p()).unwrap();
        assert_eq!(
            type_of(&t),
            SimpleType::arrow(SimpleType::form(), SimpleType::form())
        );
    }

    #[test]
    fn letter_cannot_be_applied() {
        assert_eq!(
            mk_app(p(), q()),
            Err(TypeError::NotAFunction(SimpleType::form()))
        );
    }

    #[test]
    fn argument_type_is_checked() {
        let err = mk_app(
            Term::leaf(LexicalItem::predicate('F', 1)),
            p(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            TypeError::TypeMismatch {
                expected: SimpleType::trm(),
                got: SimpleType::form()
            }
        );
    }

    #[test]
    fn abstraction_typing() {
        let x = LexicalItem::variable("x");
        let rx = mk_app(
            Term::leaf(LexicalItem::predicate('R', 1)),
            Term::leaf(x.clone()),
        )
        .unwrap();
        let lam = rx.abstract_over(&x, "x");
        assert_eq!(
            type_of(&lam),
            SimpleType::arrow(SimpleType::trm(), SimpleType::form())
        );
        assert!(!lam.has_loose_bound());
    }

    #[test]
    fn quantifier_type() {
        assert_eq!(
            type_of(&Term::leaf(LexicalItem::all())).to_string(),
            "(Trm -> Form) -> Form"
        );
    }

    #[test]
    fn decompose_parts() {
        let neg_p = mk_app(Term::leaf(LexicalItem::neg()), p()).unwrap();
        let (head, args) = decompose(&neg_p).unwrap();
        assert_eq!(head, LexicalItem::neg());
        assert_eq!(args, vec![p()]);
        assert_eq!(
            decompose(&p()),
            Err(DecomposeError::AtomicFormula(SentenceLetter::Named('P')))
        );
    }

    #[test]
    fn hints_do_not_affect_equality() {
        let x = LexicalItem::variable("x");
        let y = LexicalItem::variable("y");
        let f = |v: &LexicalItem| {
            mk_app(
                Term::leaf(LexicalItem::predicate('R', 1)),
                Term::leaf(v.clone()),
            )
            .unwrap()
        };
        assert_eq!(f(&x).abstract_over(&x, "x"), f(&y).abstract_over(&y, "y"));
        assert_ne!(f(&x).abstract_over(&y, "y"), f(&y).abstract_over(&y, "y"));
    }
}
