//! Inference rules as sequent schemas over context variables, and the
//! reduction of rule-instance checking to matching.

mod library;
mod schema;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{self, Substitution};
use crate::notation::{print, print_item, Notation};
use crate::syntax::{Language, LexicalItem, Term};
use crate::unify::{self, SearchBudget, UnifyError};

pub use library::{builtin_systems, system};
pub use schema::{parse_rule, parse_sequent};

/// More antecedent formulas than this are not split among two contexts.
pub const MAX_SPLIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("no rule named `{0}`")]
    UnknownRule(String),
    #[error("ill-formed schema for {rule}: {detail}")]
    IllFormedSchema { rule: String, detail: String },
}

/// `Γ1, Γ2, A1, .., An ⊢ B`. Instance sequents have no context variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub contexts: Vec<u32>,
    pub antecedent: Vec<Term>,
    pub succedent: Term,
}

impl Sequent {
    pub fn instance(antecedent: Vec<Term>, succedent: Term) -> Self {
        Sequent {
            contexts: Vec::new(),
            antecedent,
            succedent,
        }
    }

    pub fn display(&self, notation: Notation) -> String {
        schema::print_sequent(self, notation)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(Notation::ASCII))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
    /// Term schemas subject to the eigenvariable condition.
    pub fresh: Vec<LexicalItem>,
}

impl Rule {
    pub fn new(
        name: &str,
        premises: Vec<Sequent>,
        conclusion: Sequent,
        fresh: Vec<LexicalItem>,
    ) -> Result<Rule, RuleError> {
        let bad = |detail: &str| RuleError::IllFormedSchema {
            rule: name.to_string(),
            detail: detail.to_string(),
        };
        for s in premises.iter().chain([&conclusion]) {
            if !s.succedent.is_formula() || s.antecedent.iter().any(|a| !a.is_formula()) {
                return Err(bad("sequents are built from formulas"));
            }
            if s.antecedent.iter().chain([&s.succedent]).any(|f| f.has_loose_bound()) {
                return Err(bad("schemas must be closed"));
            }
        }
        for p in &premises {
            if p.contexts.len() > 2 {
                return Err(bad("a premise has at most two context variables"));
            }
            let distinct: BTreeSet<_> = p.contexts.iter().collect();
            if distinct.len() != p.contexts.len() {
                return Err(bad("a context variable repeats within one antecedent"));
            }
            if let Some(g) = p.contexts.iter().find(|g| !conclusion.contexts.contains(g)) {
                return Err(bad(&format!("context G{g} is dropped by the conclusion")));
            }
        }
        let premise_ctx: BTreeSet<u32> = premises.iter().flat_map(|p| p.contexts.clone()).collect();
        if let Some(g) = conclusion.contexts.iter().find(|g| !premise_ctx.contains(g)) {
            return Err(bad(&format!("context G{g} does not occur in any premise")));
        }
        Ok(Rule {
            name: name.to_string(),
            premises,
            conclusion,
            fresh,
        })
    }

    pub fn schema(&self, notation: Notation) -> String {
        schema::print_rule(self, notation)
    }

    fn schematic_vars(&self) -> BTreeSet<LexicalItem> {
        let mut out = BTreeSet::new();
        for s in self.premises.iter().chain([&self.conclusion]) {
            for f in s.antecedent.iter().chain([&s.succedent]) {
                out.extend(lambda::schematic_vars(f));
            }
        }
        out
    }
}

pub fn declare_rule(
    name: &str,
    premises: Vec<Sequent>,
    conclusion: Sequent,
) -> Result<Rule, RuleError> {
    Rule::new(name, premises, conclusion, Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProofFormat {
    Fitch,
    Montague,
    Hardegree,
}

impl ProofFormat {
    pub fn name(self) -> &'static str {
        match self {
            ProofFormat::Fitch => "fitch",
            ProofFormat::Montague => "montague",
            ProofFormat::Hardegree => "hardegree",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fitch" => Some(ProofFormat::Fitch),
            "montague" => Some(ProofFormat::Montague),
            "hardegree" => Some(ProofFormat::Hardegree),
            _ => None,
        }
    }
}

/// A logic: a language, a proof format and a rule library.
#[derive(Debug)]
pub struct System {
    pub id: String,
    pub language: Language,
    pub format: ProofFormat,
    pub rules: Vec<Rule>,
    /// Citation name to canonical rule name.
    pub aliases: BTreeMap<String, String>,
    derived: RwLock<Vec<Rule>>,
}

impl Clone for System {
    fn clone(&self) -> Self {
        System {
            id: self.id.clone(),
            language: self.language.clone(),
            format: self.format,
            rules: self.rules.clone(),
            aliases: self.aliases.clone(),
            derived: RwLock::new(self.derived_rules()),
        }
    }
}

impl System {
    pub fn new(
        id: &str,
        language: Language,
        format: ProofFormat,
        rules: Vec<Rule>,
        aliases: BTreeMap<String, String>,
    ) -> Self {
        System {
            id: id.to_string(),
            language,
            format,
            rules,
            aliases,
            derived: RwLock::new(Vec::new()),
        }
    }

    pub fn derived_rules(&self) -> Vec<Rule> {
        self.derived.read().unwrap().clone()
    }

    /// Adds a derived rule, replacing one of the same name.
    pub fn register_derived(&self, rule: Rule) {
        let mut d = self.derived.write().unwrap();
        d.retain(|r| r.name != rule.name);
        d.push(rule);
    }

    /// Canonical rule names in declaration order.
    pub fn rule_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rules {
            if !out.contains(&r.name) {
                out.push(r.name.clone());
            }
        }
        out
    }

    pub fn resolve(&self, citation: &str) -> String {
        if let Some(n) = self.aliases.get(citation) {
            return n.clone();
        }
        if let Some(n) = library::global_alias(citation) {
            if self.rules.iter().any(|r| r.name == n) {
                return n.to_string();
            }
        }
        citation.to_string()
    }

    /// Rule variants cited by `citation`, built-in ones first, then derived
    /// rules of the system, then `extra`.
    pub fn lookup(&self, citation: &str, extra: &[Rule]) -> Vec<Rule> {
        let name = self.resolve(citation);
        let mut out: Vec<Rule> = self.rules.iter().filter(|r| r.name == name).cloned().collect();
        if out.is_empty() {
            out.extend(self.derived_rules().into_iter().filter(|r| r.name == citation));
            out.extend(extra.iter().filter(|r| r.name == citation).cloned());
        }
        out
    }

    pub fn check_inference(
        &self,
        rule_name: &str,
        premises: &[Sequent],
        conclusion: &Sequent,
    ) -> Result<MatchVerdict, RuleError> {
        self.check_inference_with(rule_name, premises, conclusion, &[], SearchBudget::default())
    }

    pub fn check_inference_with(
        &self,
        rule_name: &str,
        premises: &[Sequent],
        conclusion: &Sequent,
        extra: &[Rule],
        budget: SearchBudget,
    ) -> Result<MatchVerdict, RuleError> {
        let variants = self.lookup(rule_name, extra);
        if variants.is_empty() {
            return Err(RuleError::UnknownRule(rule_name.to_string()));
        }
        Ok(check_variants(&variants, premises, conclusion, budget))
    }
}

pub fn check_inference(
    system: &System,
    rule_name: &str,
    premises: &[Sequent],
    conclusion: &Sequent,
) -> Result<MatchVerdict, RuleError> {
    system.check_inference(rule_name, premises, conclusion)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    Mismatch,
    Eigenvariable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchVerdict {
    Instance {
        theta: Substitution,
        /// Image of each context variable.
        contexts: BTreeMap<u32, Vec<Term>>,
        /// Index among the variants sharing the cited name.
        variant: usize,
        /// Cited premise `i` was matched against rule premise `order[i]`.
        order: Vec<usize>,
    },
    NoMatch(Diagnostic),
    Budget,
}

impl MatchVerdict {
    pub fn is_instance(&self) -> bool {
        matches!(self, MatchVerdict::Instance { .. })
    }
}

fn dedup(fs: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for f in fs {
        if !out.contains(f) {
            out.push(f.clone());
        }
    }
    out
}

fn set_eq(a: &[Term], b: &[Term]) -> bool {
    a.iter().all(|x| b.contains(x)) && b.iter().all(|x| a.contains(x))
}

// One way to line up a schema antecedent with an instance antecedent.
#[derive(Clone)]
struct Split {
    explicit: Vec<(Term, Term)>,
    contexts: Vec<(u32, Vec<Term>)>,
}

fn splits(schema: &Sequent, instance: &[Term]) -> Option<Vec<Split>> {
    let inst = dedup(instance);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let ok = assign(&schema.antecedent, &inst, &mut chosen, &mut |used: &[usize]| {
        let rest: Vec<Term> = inst
            .iter()
            .enumerate()
            .filter(|(i, _)| !used.contains(i))
            .map(|(_, t)| t.clone())
            .collect();
        let explicit: Vec<(Term, Term)> = schema
            .antecedent
            .iter()
            .zip(used)
            .map(|(s, i)| (s.clone(), inst[*i].clone()))
            .collect();
        match schema.contexts.as_slice() {
            [] if rest.is_empty() => out.push(Split {
                explicit,
                contexts: Vec::new(),
            }),
            [] => {}
            [g] => out.push(Split {
                explicit,
                contexts: vec![(*g, rest)],
            }),
            [g1, g2] => {
                if rest.len() > MAX_SPLIT {
                    return false;
                }
                for mask in 0u32..(1 << rest.len()) {
                    let (mut a, mut b) = (Vec::new(), Vec::new());
                    for (i, t) in rest.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            b.push(t.clone());
                        } else {
                            a.push(t.clone());
                        }
                    }
                    out.push(Split {
                        explicit: explicit.clone(),
                        contexts: vec![(*g1, a), (*g2, b)],
                    });
                }
            }
            _ => unreachable!("checked when the rule is built"),
        }
        true
    });
    ok.then_some(out)
}

// Injective assignments of schema formulas to instance positions. Returns
// false if the callback refused one.
fn assign(
    schemas: &[Term],
    inst: &[Term],
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == schemas.len() {
        return f(chosen);
    }
    for i in 0..inst.len() {
        if chosen.contains(&i) {
            continue;
        }
        chosen.push(i);
        let ok = assign(schemas, inst, chosen, f);
        chosen.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

enum Attempt {
    Found(Substitution, BTreeMap<u32, Vec<Term>>),
    Eigen(String),
    Mismatch,
    Budget,
}

/// Tries every variant, every assignment of cited premises to premise
/// slots, and every way of splitting antecedents among context variables.
pub fn check_variants(
    variants: &[Rule],
    premises: &[Sequent],
    conclusion: &Sequent,
    budget: SearchBudget,
) -> MatchVerdict {
    let name = variants.first().map(|r| r.name.as_str()).unwrap_or("");
    let mut eigen: Option<String> = None;
    let mut budget_hit = false;
    let mut arity_ok = false;
    for (v, rule) in variants.iter().enumerate() {
        if rule.premises.len() != premises.len() {
            continue;
        }
        arity_ok = true;
        for perm in permutations(premises.len()) {
            // perm[slot] = index of the cited premise placed in `slot`.
            match attempt(rule, &perm, premises, conclusion, budget) {
                Attempt::Found(theta, contexts) => {
                    let mut order = vec![0; perm.len()];
                    for (slot, p) in perm.iter().enumerate() {
                        order[*p] = slot;
                    }
                    return MatchVerdict::Instance {
                        theta,
                        contexts,
                        variant: v,
                        order,
                    };
                }
                Attempt::Eigen(m) => {
                    eigen.get_or_insert(m);
                }
                Attempt::Budget => budget_hit = true,
                Attempt::Mismatch => {}
            }
        }
    }
    if let Some(message) = eigen {
        return MatchVerdict::NoMatch(Diagnostic {
            kind: DiagnosticKind::Eigenvariable,
            message,
        });
    }
    if budget_hit {
        return MatchVerdict::Budget;
    }
    let message = if arity_ok {
        format!("not an instance of {name}")
    } else {
        let counts: BTreeSet<usize> = variants.iter().map(|r| r.premises.len()).collect();
        let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        format!(
            "{name} takes {} cited line(s), {} given",
            counts.join(" or "),
            premises.len()
        )
    };
    MatchVerdict::NoMatch(Diagnostic {
        kind: DiagnosticKind::Mismatch,
        message,
    })
}

fn attempt(
    rule: &Rule,
    perm: &[usize],
    premises: &[Sequent],
    conclusion: &Sequent,
    budget: SearchBudget,
) -> Attempt {
    let mut options: Vec<Vec<Split>> = Vec::new();
    for (slot, schema) in rule.premises.iter().enumerate() {
        match splits(schema, &premises[perm[slot]].antecedent) {
            Some(s) => options.push(s),
            None => return Attempt::Budget,
        }
    }
    let flexibles = rule.schematic_vars();
    let concl_ante = dedup(&conclusion.antecedent);
    let mut cache: HashMap<Vec<(Term, Term)>, (Vec<Substitution>, bool)> = HashMap::new();
    let mut result = Attempt::Mismatch;
    let mut pick = vec![0usize; options.len()];
    if options.iter().any(|o| o.is_empty()) {
        return Attempt::Mismatch;
    }
    loop {
        let combo: Vec<&Split> = pick.iter().enumerate().map(|(i, k)| &options[i][*k]).collect();
        if let Some(ctx) = merge_contexts(&combo) {
            let weakening_ok = rule.conclusion.contexts.iter().all(|g| {
                ctx.get(g)
                    .is_some_and(|img| img.iter().all(|f| concl_ante.contains(f)))
            });
            if weakening_ok {
                let mut eqs: Vec<(Term, Term)> = Vec::new();
                for (slot, split) in combo.iter().enumerate() {
                    eqs.push((
                        rule.premises[slot].succedent.clone(),
                        premises[perm[slot]].succedent.clone(),
                    ));
                    eqs.extend(split.explicit.iter().cloned());
                }
                eqs.push((rule.conclusion.succedent.clone(), conclusion.succedent.clone()));
                let (sols, exhausted) = cache
                    .entry(eqs.clone())
                    .or_insert_with(|| solve(&eqs, &flexibles, budget))
                    .clone();
                if exhausted {
                    result = merge(result, Attempt::Budget);
                }
                for theta in sols {
                    match finish(rule, &theta, &ctx, conclusion, &concl_ante) {
                        Ok(()) => return Attempt::Found(theta, ctx),
                        Err(Some(m)) => result = merge(result, Attempt::Eigen(m)),
                        Err(None) => {}
                    }
                }
            }
        }
        // Next combination, last premise varying fastest.
        let mut i = pick.len();
        loop {
            if i == 0 {
                return result;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

fn merge(a: Attempt, b: Attempt) -> Attempt {
    match (a, b) {
        (Attempt::Eigen(m), _) | (_, Attempt::Eigen(m)) => Attempt::Eigen(m),
        (Attempt::Budget, _) | (_, Attempt::Budget) => Attempt::Budget,
        _ => Attempt::Mismatch,
    }
}

fn merge_contexts(combo: &[&Split]) -> Option<BTreeMap<u32, Vec<Term>>> {
    let mut ctx: BTreeMap<u32, Vec<Term>> = BTreeMap::new();
    for split in combo {
        for (g, img) in &split.contexts {
            match ctx.get(g) {
                Some(prev) if !set_eq(prev, img) => return None,
                Some(_) => {}
                None => {
                    ctx.insert(*g, img.clone());
                }
            }
        }
    }
    Some(ctx)
}

fn solve(
    eqs: &[(Term, Term)],
    flexibles: &BTreeSet<LexicalItem>,
    budget: SearchBudget,
) -> (Vec<Substitution>, bool) {
    match unify::match_all(eqs.iter().cloned(), flexibles.iter().cloned(), budget) {
        Ok(stream) => {
            let (sols, err) = stream.collect_all();
            (sols, matches!(err, Some(UnifyError::BudgetExhausted { .. })))
        }
        Err(_) => (Vec::new(), false),
    }
}

// Explicit conclusion formulas and the eigenvariable condition. `Err(None)`
// is a plain mismatch.
fn finish(
    rule: &Rule,
    theta: &Substitution,
    ctx: &BTreeMap<u32, Vec<Term>>,
    conclusion: &Sequent,
    concl_ante: &[Term],
) -> Result<(), Option<String>> {
    for f in &rule.conclusion.antecedent {
        let img = unify::apply(theta, f).map_err(|_| None)?;
        if !concl_ante.contains(&img) {
            return Err(None);
        }
    }
    for tau in &rule.fresh {
        let Some(img) = theta.get(tau) else {
            continue;
        };
        let shown = print(img, Notation::ASCII);
        let item = match img.as_leaf() {
            Some(i) if i.is_individual() => i,
            _ => {
                return Err(Some(format!(
                    "eigenvariable condition violated: {shown} is not a name"
                )))
            }
        };
        let violated = |place: &str| {
            Err(Some(format!(
                "eigenvariable condition violated: {} occurs in {place}",
                print_item(item, Notation::ASCII)
            )))
        };
        if conclusion.succedent.contains_leaf(item) {
            return violated("the conclusion");
        }
        if ctx.values().flatten().chain(concl_ante).any(|f| f.contains_leaf(item)) {
            return violated("an undischarged assumption");
        }
        for s in rule.premises.iter().chain([&rule.conclusion]) {
            for f in s.antecedent.iter().chain([&s.succedent]) {
                if f.contains_leaf(tau) {
                    continue;
                }
                let img = unify::apply(theta, f).map_err(|_| None)?;
                if img.contains_leaf(item) {
                    return violated("a premise of the inference");
                }
            }
        }
    }
    Ok(())
}
