//! Huet pre-unification for simply typed terms in βη-long form, run as a
//! bounded depth-first search that lazily yields unifiers.
//!
//! Flexible heads are the declared schematic items plus the `Meta`
//! variables the search introduces. Constraints are kept as pairs of
//! base-type bodies under a context of binder types, so bound variables of
//! the context are ordinary rigid heads.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lambda::{self, normalize, replace_leaves, SubstError, Substitution};
use crate::notation::{print, print_item, Notation};
use crate::syntax::{Category, LexicalItem, SimpleType, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    /// Deepest chain of imitation/projection bindings explored.
    pub max_depth: u32,
    /// Search states examined before giving up.
    pub max_nodes: u64,
    pub max_solutions: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 12,
            max_nodes: 20_000,
            max_solutions: 16,
        }
    }
}

impl SearchBudget {
    pub fn unlimited_solutions(self) -> Self {
        SearchBudget {
            max_solutions: usize::MAX,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("search budget exhausted after {nodes} states")]
    BudgetExhausted { nodes: u64 },
    #[error("equation sides have different types: {lhs} and {rhs}")]
    IllTypedProblem { lhs: SimpleType, rhs: SimpleType },
    #[error("{0:?} is not a schematic item and cannot be flexible")]
    NotFlexible(LexicalItem),
    #[error("ground side contains the flexible {0:?}")]
    NotGround(LexicalItem),
}

/// Why a branch of the search closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Clash { left: String, right: String },
    OccursCheck(LexicalItem),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Clash { left, right } => write!(f, "cannot match {left} with {right}"),
            Failure::OccursCheck(x) => write!(
                f,
                "{} would have to occur in its own image",
                print_item(x, Notation::ASCII)
            ),
        }
    }
}

/// An equation between base-type bodies under binders of `ctx`
/// (innermost last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub ctx: Vec<SimpleType>,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone)]
pub struct UnificationProblem {
    constraints: Vec<Constraint>,
    flexibles: Arc<BTreeSet<LexicalItem>>,
    /// Bindings made so far, including those of search metas.
    solution: Substitution,
    next_meta: u32,
    depth: BTreeMap<u32, u32>,
}

impl UnificationProblem {
    pub fn new(
        equations: impl IntoIterator<Item = Equation>,
        flexibles: impl IntoIterator<Item = LexicalItem>,
    ) -> Result<Self, UnifyError> {
        let flexibles: BTreeSet<LexicalItem> = flexibles.into_iter().collect();
        if let Some(x) = flexibles.iter().find(|x| !x.is_schematic()) {
            return Err(UnifyError::NotFlexible(x.clone()));
        }
        let mut constraints = Vec::new();
        let mut next_meta = 0;
        for eq in equations {
            if eq.lhs.ty() != eq.rhs.ty() {
                return Err(UnifyError::IllTypedProblem {
                    lhs: eq.lhs.ty().clone(),
                    rhs: eq.rhs.ty().clone(),
                });
            }
            for side in [&eq.lhs, &eq.rhs] {
                side.visit_leaves(&mut |i| {
                    if let LexicalItem::Meta { id, .. } = i {
                        next_meta = next_meta.max(id + 1);
                    }
                });
            }
            constraints.push(constraint(Vec::new(), &normalize(&eq.lhs), &normalize(&eq.rhs)));
        }
        Ok(UnificationProblem {
            constraints,
            flexibles: Arc::new(flexibles),
            solution: Substitution::new(),
            next_meta,
            depth: BTreeMap::new(),
        })
    }

    /// Every schematic leaf of the equations is flexible.
    pub fn schematic(equations: Vec<Equation>) -> Result<Self, UnifyError> {
        let mut flex = BTreeSet::new();
        for eq in &equations {
            flex.extend(lambda::schematic_vars(&eq.lhs));
            flex.extend(lambda::schematic_vars(&eq.rhs));
        }
        Self::new(equations, flex)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn flexibles(&self) -> &BTreeSet<LexicalItem> {
        &self.flexibles
    }

    /// Leaves of the constraints that are treated as rigid.
    pub fn constants(&self) -> BTreeSet<LexicalItem> {
        let mut out = BTreeSet::new();
        for c in &self.constraints {
            for side in [&c.lhs, &c.rhs] {
                side.visit_leaves(&mut |i| {
                    if !self.is_flexible(i) {
                        out.insert(i.clone());
                    }
                });
            }
        }
        out
    }

    /// The bindings of declared flexibles made so far.
    pub fn solution(&self) -> Substitution {
        let mut s = self.solution.clone();
        s.retain(|k| self.flexibles.contains(k));
        s
    }

    fn is_flexible(&self, item: &LexicalItem) -> bool {
        matches!(item, LexicalItem::Meta { .. }) || self.flexibles.contains(item)
    }

    fn depth_of(&self, item: &LexicalItem) -> u32 {
        match item {
            LexicalItem::Meta { id, .. } => self.depth.get(id).copied().unwrap_or(0),
            _ => 0,
        }
    }

    fn fresh_meta(&mut self, ty: SimpleType, depth: u32) -> LexicalItem {
        let id = self.next_meta;
        self.next_meta += 1;
        self.depth.insert(id, depth);
        LexicalItem::Meta { id, ty }
    }

    // Composes `x := image` into the solution and rewrites every constraint.
    fn bind(&mut self, x: &LexicalItem, image: Term) {
        let rewrite = |t: &Term| normalize(&replace_leaves(t, &|i| (i == x).then(|| image.clone())));
        let mut next = Substitution::new();
        for (k, v) in &self.solution {
            next.insert_unchecked(k.clone(), rewrite(v));
        }
        next.insert_unchecked(x.clone(), image.clone());
        self.solution = next;
        let old = std::mem::take(&mut self.constraints);
        self.constraints = old
            .into_iter()
            .map(|c| Constraint {
                lhs: rewrite(&c.lhs),
                rhs: rewrite(&c.rhs),
                ctx: c.ctx,
            })
            .collect();
    }
}

fn strip_lams(t: &Term) -> (Vec<SimpleType>, &Term) {
    let mut tys = Vec::new();
    let mut body = t;
    while let TermKind::Lam { bound_ty, body: b, .. } = body.kind() {
        tys.push(bound_ty.clone());
        body = b;
    }
    (tys, body)
}

fn constraint(mut ctx: Vec<SimpleType>, l: &Term, r: &Term) -> Constraint {
    let (tl, bl) = strip_lams(l);
    let (_, br) = strip_lams(r);
    ctx.extend(tl);
    Constraint {
        ctx,
        lhs: bl.clone(),
        rhs: br.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Head<'a> {
    Flex(&'a LexicalItem),
    Const(&'a LexicalItem),
    Bound(u32),
}

fn head<'a>(p: &UnificationProblem, t: &'a Term) -> (Head<'a>, Vec<&'a Term>) {
    let (h, args) = t.spine();
    let head = match h.kind() {
        TermKind::Leaf(i) if p.is_flexible(i) => Head::Flex(i),
        TermKind::Leaf(i) => Head::Const(i),
        TermKind::Bound(k) => Head::Bound(*k),
        _ => unreachable!("constraint bodies are beta-normal"),
    };
    (head, args)
}

// The bound variable an argument eta-contracts to, if any.
fn as_bound_var(t: &Term) -> Option<u32> {
    let (binders, body) = strip_lams(t);
    let m = binders.len() as u32;
    let (h, args) = body.spine();
    let TermKind::Bound(k) = h.kind() else {
        return None;
    };
    if args.len() as u32 != m || *k < m {
        return None;
    }
    for (j, a) in args.iter().enumerate() {
        if as_bound_var(a) != Some(m - 1 - j as u32) {
            return None;
        }
    }
    Some(k - m)
}

fn loose_indices(t: &Term) -> BTreeSet<u32> {
    fn go(t: &Term, depth: u32, out: &mut BTreeSet<u32>) {
        match t.kind() {
            TermKind::Leaf(_) => {}
            TermKind::Bound(k) if *k >= depth => {
                out.insert(k - depth);
            }
            TermKind::Bound(_) => {}
            TermKind::App(a, b) => {
                go(a, depth, out);
                go(b, depth, out);
            }
            TermKind::Lam { body, .. } => go(body, depth + 1, out),
        }
    }
    let mut out = BTreeSet::new();
    go(t, 0, &mut out);
    out
}

fn rename_loose(t: &Term, map: &BTreeMap<u32, u32>, depth: u32) -> Term {
    match t.kind() {
        TermKind::Leaf(_) => t.clone(),
        TermKind::Bound(k) if *k >= depth => Term::bound(map[&(k - depth)] + depth, t.ty().clone()),
        TermKind::Bound(_) => t.clone(),
        TermKind::App(a, b) => {
            Term::app_unchecked(rename_loose(a, map, depth), rename_loose(b, map, depth))
        }
        TermKind::Lam {
            bound_hint,
            bound_ty,
            body,
        } => Term::lam(bound_hint, bound_ty.clone(), rename_loose(body, map, depth + 1)),
    }
}

// Whether `x` occurs in `t` outside the arguments of other flexible heads.
fn occurs_rigid(p: &UnificationProblem, x: &LexicalItem, t: &Term) -> bool {
    match t.kind() {
        TermKind::Lam { body, .. } => occurs_rigid(p, x, body),
        _ => {
            let (h, args) = head(p, t);
            match h {
                Head::Flex(y) if y == x => true,
                Head::Flex(_) => false,
                _ => args.iter().any(|a| occurs_rigid(p, x, a)),
            }
        }
    }
}

enum Solve {
    Bound,
    Occurs(LexicalItem),
    No,
}

// `X(y1..yn) = t` with distinct bound arguments and `X` absent from `t`
// is solved by `X := \y1..yn. t`.
fn try_solve(p: &mut UnificationProblem, flex: &Term, other: &Term) -> Solve {
    let (Head::Flex(x), args) = head(p, flex) else {
        return Solve::No;
    };
    let x = x.clone();
    let vars: Option<Vec<u32>> = args.iter().map(|a| as_bound_var(a)).collect();
    let Some(vars) = vars else {
        return Solve::No;
    };
    let distinct: BTreeSet<u32> = vars.iter().copied().collect();
    if distinct.len() != vars.len() {
        return Solve::No;
    }
    if other.contains_leaf(&x) {
        return if occurs_rigid(p, &x, other) {
            Solve::Occurs(x)
        } else {
            Solve::No
        };
    }
    if !loose_indices(other).is_subset(&distinct) {
        return Solve::No;
    }
    let n = vars.len() as u32;
    let map: BTreeMap<u32, u32> = vars
        .iter()
        .enumerate()
        .map(|(i, k)| (*k, n - 1 - i as u32))
        .collect();
    let mut image = rename_loose(other, &map, 0);
    let xty = x.ty();
    let (arg_tys, _) = xty.unfold();
    for (i, ty) in arg_tys.iter().enumerate().rev() {
        image = Term::lam(&lambda::binder_hint(ty, i), (*ty).clone(), image);
    }
    p.bind(&x, normalize(&image));
    Solve::Bound
}

fn describe_head(h: &Head<'_>, t: &Term) -> String {
    match h {
        Head::Bound(_) => "a bound variable".to_string(),
        _ => print(t, Notation::ASCII),
    }
}

enum Step {
    Fail(Failure),
    Solved,
    Branch { children: Vec<UnificationProblem>, pruned: bool },
}

// Runs the deterministic rules to a fixpoint.
fn reduce(p: &mut UnificationProblem) -> Result<(), Failure> {
    'restart: loop {
        let mut i = 0;
        while i < p.constraints.len() {
            let c = p.constraints[i].clone();
            if c.lhs == c.rhs {
                p.constraints.remove(i);
                continue;
            }
            let (hl, al) = head(p, &c.lhs);
            let (hr, ar) = head(p, &c.rhs);
            match (&hl, &hr) {
                (Head::Flex(_), _) | (_, Head::Flex(_)) => {
                    let (f, o) = if matches!(hl, Head::Flex(_)) {
                        (&c.lhs, &c.rhs)
                    } else {
                        (&c.rhs, &c.lhs)
                    };
                    let mut outcome = try_solve(p, f, o);
                    if matches!(outcome, Solve::No) && matches!((&hl, &hr), (Head::Flex(_), Head::Flex(_))) {
                        outcome = try_solve(p, o, f);
                    }
                    match outcome {
                        Solve::Bound => continue 'restart,
                        Solve::Occurs(x) => return Err(Failure::OccursCheck(x)),
                        Solve::No => i += 1,
                    }
                }
                _ => {
                    if hl != hr || al.len() != ar.len() {
                        return Err(Failure::Clash {
                            left: describe_head(&hl, &c.lhs),
                            right: describe_head(&hr, &c.rhs),
                        });
                    }
                    let parts: Vec<Constraint> = al
                        .iter()
                        .zip(&ar)
                        .map(|(l, r)| constraint(c.ctx.clone(), l, r))
                        .collect();
                    p.constraints.splice(i..=i, parts);
                }
            }
        }
        return Ok(());
    }
}

fn step(mut p: UnificationProblem, max_depth: u32) -> Step {
    if let Err(f) = reduce(&mut p) {
        return Step::Fail(f);
    }
    // First flex-rigid constraint, flexible side first.
    let target = p.constraints.iter().enumerate().find_map(|(i, c)| {
        let (hl, _) = head(&p, &c.lhs);
        let (hr, _) = head(&p, &c.rhs);
        match (hl, hr) {
            (Head::Flex(_), Head::Flex(_)) => None,
            (Head::Flex(_), _) => Some((i, false)),
            (_, Head::Flex(_)) => Some((i, true)),
            _ => None,
        }
    });
    let Some((i, swap)) = target else {
        return Step::Solved;
    };
    let c = &p.constraints[i];
    let (flex, rigid) = if swap { (&c.rhs, &c.lhs) } else { (&c.lhs, &c.rhs) };
    let (Head::Flex(x), _) = head(&p, flex) else {
        unreachable!()
    };
    let x = x.clone();
    let (rigid_head, _) = head(&p, rigid);
    let rigid_head = match rigid_head {
        Head::Const(c) => Some(c.clone()),
        _ => None,
    };
    let depth = p.depth_of(&x) + 1;
    if depth > max_depth {
        return Step::Branch {
            children: Vec::new(),
            pruned: true,
        };
    }
    let ty = x.ty();
    let (arg_tys, target_cat) = ty.unfold();
    let arg_tys: Vec<SimpleType> = arg_tys.into_iter().cloned().collect();
    let n = arg_tys.len() as u32;

    // `\y1..yn. h (H1 y1..yn) .. (Hm y1..yn)` for a head of type `tys -> _`.
    let build = |p: &mut UnificationProblem, h: Term, tys: Vec<SimpleType>| -> Term {
        let ys: Vec<Term> = arg_tys
            .iter()
            .enumerate()
            .map(|(i, t)| Term::bound(n - 1 - i as u32, t.clone()))
            .collect();
        let mut body = h;
        for t in tys {
            let hty = SimpleType::curried(arg_tys.iter().cloned(), t);
            let m = p.fresh_meta(hty, depth);
            body = Term::app_unchecked(body, Term::apply_unchecked(Term::leaf(m), ys.clone()));
        }
        for (i, t) in arg_tys.iter().enumerate().rev() {
            body = Term::lam(&lambda::binder_hint(t, i), t.clone(), body);
        }
        normalize(&body)
    };

    let mut children = Vec::new();
    if let Some(c) = rigid_head {
        let mut q = p.clone();
        let cty = c.ty();
        let (tys, _) = cty.unfold();
        let tys: Vec<SimpleType> = tys.into_iter().cloned().collect();
        let image = build(&mut q, Term::leaf(c), tys);
        q.bind(&x, image);
        children.push(q);
    }
    for (i, a) in arg_tys.iter().enumerate() {
        if a.target() != target_cat {
            continue;
        }
        let mut q = p.clone();
        let (tys, _) = a.unfold();
        let tys: Vec<SimpleType> = tys.into_iter().cloned().collect();
        let image = build(&mut q, Term::bound(n - 1 - i as u32, a.clone()), tys);
        q.bind(&x, image);
        children.push(q);
    }
    Step::Branch {
        children,
        pruned: false,
    }
}

#[derive(Debug, Clone)]
pub enum Simplification {
    Solved(Substitution),
    /// Exactly one way to continue.
    Simplified(UnificationProblem),
    Fail(Failure),
    Branch(Vec<UnificationProblem>),
}

/// One round of the algorithm: the deterministic rules to a fixpoint, then
/// imitation and projection on the first flex-rigid constraint.
pub fn simplify(p: &UnificationProblem) -> Simplification {
    match step(p.clone(), u32::MAX) {
        Step::Fail(f) => Simplification::Fail(f),
        Step::Solved => {
            let mut q = p.clone();
            let _ = reduce(&mut q);
            Simplification::Solved(q.solution())
        }
        Step::Branch { mut children, .. } => match children.len() {
            0 => Simplification::Fail(Failure::Clash {
                left: "a flexible term".into(),
                right: "a bound variable it cannot reach".into(),
            }),
            1 => Simplification::Simplified(children.pop().unwrap()),
            _ => Simplification::Branch(children),
        },
    }
}

/// Lazy stream of unifiers in a fixed order. Yields
/// `Err(BudgetExhausted)` once, as its last item, if the search was cut
/// short.
pub struct Solutions {
    stack: Vec<UnificationProblem>,
    budget: SearchBudget,
    nodes: u64,
    pruned: bool,
    seen: HashSet<Substitution>,
    yielded: usize,
    done: bool,
    concrete: bool,
}

impl Solutions {
    /// Completes each unifier into a ground witness: unbound flexibles and
    /// any pending metas become constant functions onto fresh constants.
    pub fn concrete(mut self) -> Self {
        self.concrete = true;
        self
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Drains the stream, separating the solutions from a trailing error.
    pub fn collect_all(self) -> (Vec<Substitution>, Option<UnifyError>) {
        let mut out = Vec::new();
        for r in self {
            match r {
                Ok(s) => out.push(s),
                Err(e) => return (out, Some(e)),
            }
        }
        (out, None)
    }
}

impl Iterator for Solutions {
    type Item = Result<Substitution, UnifyError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        while let Some(p) = self.stack.pop() {
            self.nodes += 1;
            if self.nodes > self.budget.max_nodes {
                self.done = true;
                return Some(Err(UnifyError::BudgetExhausted { nodes: self.nodes - 1 }));
            }
            match step(p.clone(), self.budget.max_depth) {
                Step::Fail(_) => {}
                Step::Branch { children, pruned } => {
                    self.pruned |= pruned;
                    self.stack.extend(children.into_iter().rev());
                }
                Step::Solved => {
                    let mut q = p;
                    let _ = reduce(&mut q);
                    let s = if self.concrete {
                        witness(&q)
                    } else {
                        q.solution()
                    };
                    if self.seen.insert(s.clone()) {
                        self.yielded += 1;
                        if self.yielded >= self.budget.max_solutions {
                            self.done = true;
                        }
                        return Some(Ok(s));
                    }
                }
            }
        }
        self.done = true;
        if self.pruned {
            Some(Err(UnifyError::BudgetExhausted { nodes: self.nodes }))
        } else {
            None
        }
    }
}

fn fresh_for(cat: Category) -> LexicalItem {
    let (id, ty) = match cat {
        Category::Form => (0, SimpleType::form()),
        Category::Trm => (1, SimpleType::trm()),
    };
    LexicalItem::Fresh { id, ty }
}

fn constant_function(ty: &SimpleType) -> Term {
    let (args, cat) = ty.unfold();
    let mut t = Term::leaf(fresh_for(cat));
    for (i, a) in args.iter().enumerate().rev() {
        t = Term::lam(&lambda::binder_hint(a, i), (*a).clone(), t);
    }
    normalize(&t)
}

fn witness(p: &UnificationProblem) -> Substitution {
    let fill = |t: &Term| {
        normalize(&replace_leaves(t, &|i| match i {
            LexicalItem::Meta { ty, .. } => Some(constant_function(ty)),
            _ => None,
        }))
    };
    let mut out = Substitution::new();
    for x in p.flexibles.iter() {
        let image = match p.solution.get(x) {
            Some(t) => fill(t),
            None => constant_function(&x.ty()),
        };
        out.insert_unchecked(x.clone(), image);
    }
    out
}

pub fn huet_unify(p: UnificationProblem, budget: SearchBudget) -> Solutions {
    Solutions {
        stack: vec![p],
        budget,
        nodes: 0,
        pruned: false,
        seen: HashSet::new(),
        yielded: 0,
        done: false,
        concrete: false,
    }
}

/// Unification where every right-hand side is ground.
pub fn match_all(
    pairs: impl IntoIterator<Item = (Term, Term)>,
    flexibles: impl IntoIterator<Item = LexicalItem>,
    budget: SearchBudget,
) -> Result<Solutions, UnifyError> {
    let flexibles: BTreeSet<LexicalItem> = flexibles.into_iter().collect();
    let mut eqs = Vec::new();
    for (pattern, ground) in pairs {
        let mut bad = None;
        ground.visit_leaves(&mut |i| {
            if bad.is_none() && (flexibles.contains(i) || matches!(i, LexicalItem::Meta { .. })) {
                bad = Some(i.clone());
            }
        });
        if let Some(i) = bad {
            return Err(UnifyError::NotGround(i));
        }
        eqs.push(Equation::new(pattern, ground));
    }
    Ok(huet_unify(UnificationProblem::new(eqs, flexibles)?, budget))
}

pub fn match_pattern(
    pattern: &Term,
    ground: &Term,
    flexibles: impl IntoIterator<Item = LexicalItem>,
    budget: SearchBudget,
) -> Result<Solutions, UnifyError> {
    match_all([(pattern.clone(), ground.clone())], flexibles, budget)
}

/// Substitution followed by βη-long normalization.
pub fn apply(theta: &Substitution, t: &Term) -> Result<Term, SubstError> {
    Ok(normalize(&lambda::substitute(t, theta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse;
    use crate::syntax::Language;

    fn s(text: &str) -> Term {
        parse(&Language::fol().schematic(), Notation::ASCII, text).unwrap()
    }

    fn t(text: &str) -> Term {
        crate::notation::parse_term(&Language::fol().schematic(), text).unwrap()
    }

    fn phi(i: u32, arity: usize) -> LexicalItem {
        LexicalItem::phi(i, arity)
    }

    fn show(sub: &Substitution) -> Vec<(String, String)> {
        sub.iter()
            .map(|(k, v)| (print_item(k, Notation::ASCII), print(v, Notation::ASCII)))
            .collect()
    }

    #[test]
    fn modus_ponens_problem() {
        let p = UnificationProblem::new(
            [
                Equation::new(s("P /\\ R -> Q \\/ S"), s("phi1 -> phi2")),
                Equation::new(s("P /\\ R"), s("phi1")),
                Equation::new(s("Q \\/ S"), s("phi2")),
            ],
            [phi(1, 0), phi(2, 0)],
        )
        .unwrap();
        let (sols, err) = huet_unify(p, SearchBudget::default()).collect_all();
        assert_eq!(err, None);
        assert_eq!(sols.len(), 1);
        assert_eq!(
            show(&sols[0]),
            vec![
                ("phi1".to_string(), "P /\\ R".to_string()),
                ("phi2".to_string(), "Q \\/ S".to_string())
            ]
        );
    }

    #[test]
    fn universal_instantiation_problem() {
        let p = UnificationProblem::new(
            [
                Equation::new(s("Ax(R(x) /\\ Q(x))"), s("Av phi1(v)")),
                Equation::new(s("R(f(a)) /\\ Q(f(a))"), s("phi1(tau1)")),
            ],
            [phi(1, 1), LexicalItem::tau(1)],
        )
        .unwrap();
        let sols: Vec<_> = huet_unify(p, SearchBudget::default())
            .map(Result::unwrap)
            .collect();
        assert_eq!(sols.len(), 1);
        assert_eq!(
            show(&sols[0]),
            vec![
                ("phi1".to_string(), "\\x.R(x) /\\ Q(x)".to_string()),
                ("tau1".to_string(), "f(a)".to_string())
            ]
        );
    }

    #[test]
    fn simplify_examples() {
        let p = UnificationProblem::new([Equation::new(s("P /\\ R"), s("phi1"))], [phi(1, 0)]).unwrap();
        match simplify(&p) {
            Simplification::Solved(sub) => {
                assert_eq!(show(&sub), vec![("phi1".to_string(), "P /\\ R".to_string())])
            }
            other => panic!("{other:?}"),
        }
        let p = UnificationProblem::new(
            [Equation::new(s("P /\\ R"), s("phi1 -> phi2"))],
            [phi(1, 0), phi(2, 0)],
        )
        .unwrap();
        assert!(matches!(simplify(&p), Simplification::Fail(Failure::Clash { .. })));
        let p = UnificationProblem::new([Equation::new(s("P"), s("P"))], []).unwrap();
        assert!(matches!(simplify(&p), Simplification::Solved(sub) if sub.is_empty()));
    }

    #[test]
    fn reflexive_flexible() {
        let p = UnificationProblem::new([Equation::new(s("phi1"), s("phi1"))], [phi(1, 0)]).unwrap();
        let first = huet_unify(p, SearchBudget::default()).next().unwrap().unwrap();
        assert!(first.is_empty());
    }

    #[test]
    fn nonlinear_pattern_has_no_match() {
        let sols = match_pattern(&s("phi1 /\\ phi1"), &s("P /\\ Q"), [phi(1, 0)], SearchBudget::default())
            .unwrap()
            .collect_all();
        assert_eq!(sols, (vec![], None));
    }

    #[test]
    fn generalization_matches_both_ways() {
        let (sols, err) = match_pattern(
            &s("phi1(tau1)"),
            &s("R(f(a)) /\\ Q(f(a))"),
            [phi(1, 1), LexicalItem::tau(1)],
            SearchBudget::default().unlimited_solutions(),
        )
        .unwrap()
        .collect_all();
        assert_eq!(err, None);
        let shown: Vec<_> = sols.iter().map(show).collect();
        // Imitation all the way down comes first: the vacuous abstraction.
        assert_eq!(
            shown[0],
            vec![("phi1".to_string(), "\\x.R(f(a)) /\\ Q(f(a))".to_string())]
        );
        assert!(shown.contains(&vec![
            ("phi1".to_string(), "\\x.R(x) /\\ Q(x)".to_string()),
            ("tau1".to_string(), "f(a)".to_string())
        ]));
        // Any subset of the two f(a) occurrences, plus the two a's.
        assert_eq!(sols.len(), 1 + 3 + 3);
    }

    #[test]
    fn ground_side_must_be_ground() {
        let err = match_pattern(&s("phi1"), &s("phi1"), [phi(1, 0)], SearchBudget::default()).err();
        assert_eq!(err, Some(UnifyError::NotGround(phi(1, 0))));
    }

    #[test]
    fn ill_typed_problem() {
        let err = UnificationProblem::new([Equation::new(s("P"), t("tau1"))], []).unwrap_err();
        assert!(matches!(err, UnifyError::IllTypedProblem { .. }));
    }

    #[test]
    fn occurs_check_on_rigid_occurrence() {
        let p = UnificationProblem::new([Equation::new(s("phi1"), s("~phi1"))], [phi(1, 0)]).unwrap();
        assert!(matches!(simplify(&p), Simplification::Fail(Failure::OccursCheck(_))));
    }

    #[test]
    fn flex_flex_is_pre_solved_and_witnessed() {
        let p = UnificationProblem::new(
            [Equation::new(s("phi1(a)"), s("phi2(b)"))],
            [phi(1, 1), phi(2, 1)],
        )
        .unwrap();
        let sols = huet_unify(p.clone(), SearchBudget::default()).collect_all();
        assert_eq!(sols, (vec![Substitution::new()], None));
        let w = huet_unify(p, SearchBudget::default()).concrete().next().unwrap().unwrap();
        let l = apply(&w, &s("phi1(a)")).unwrap();
        let r = apply(&w, &s("phi2(b)")).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let budget = SearchBudget {
            max_nodes: 3,
            ..SearchBudget::default()
        };
        let last = match_pattern(&s("phi1(tau1)"), &s("R(f(a)) /\\ Q(f(a))"), [phi(1, 1), LexicalItem::tau(1)], budget)
            .unwrap()
            .last();
        assert!(matches!(last, Some(Err(UnifyError::BudgetExhausted { .. }))));
    }

    #[test]
    fn apply_examples() {
        let sub = Substitution::new().with(phi(1, 0), s("P")).unwrap();
        assert_eq!(apply(&sub, &s("phi1 /\\ phi1")).unwrap(), s("P /\\ P"));
        let body = s("R(x) /\\ Q(x)").abstract_over(&LexicalItem::variable("x"), "x");
        let sub = Substitution::new()
            .with(phi(1, 1), body)
            .unwrap()
            .with(LexicalItem::tau(1), t("f(a)"))
            .unwrap();
        assert_eq!(apply(&sub, &s("phi1(tau1)")).unwrap(), s("R(f(a)) /\\ Q(f(a))"));
        let t = s("Ax(F(x) -> P)");
        assert_eq!(apply(&Substitution::new(), &t).unwrap(), t);
    }
}
