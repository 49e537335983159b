use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::notation::{print, print_item, Notation};
use crate::rules::{DiagnosticKind, MatchVerdict, ProofFormat, Rule, Sequent, System};
use crate::syntax::{LexicalItem, Term};
use crate::unify::SearchBudget;

use super::document::{Citation, LineKind, ProofDocument};
use super::render::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineStatus {
    Correct,
    ParseError,
    NoSuchRule,
    RuleMismatch,
    InaccessibleLine,
    EigenvariableViolation,
    IncompleteSubproof,
}

impl LineStatus {
    pub fn name(self) -> &'static str {
        match self {
            LineStatus::Correct => "Correct",
            LineStatus::ParseError => "ParseError",
            LineStatus::NoSuchRule => "NoSuchRule",
            LineStatus::RuleMismatch => "RuleMismatch",
            LineStatus::InaccessibleLine => "InaccessibleLine",
            LineStatus::EigenvariableViolation => "EigenvariableViolation",
            LineStatus::IncompleteSubproof => "IncompleteSubproof",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFeedback {
    pub line: usize,
    pub source_line: usize,
    pub status: LineStatus,
    pub message: String,
    /// Schematic variable or context name to its image, ASCII notation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub lines: Vec<LineFeedback>,
    pub complete: bool,
    pub derived_sequent: Option<Sequent>,
    /// Whether the derived sequent meets the declared goal, if one is declared.
    pub goal_met: Option<bool>,
    pub rendered: String,
}

#[derive(Debug, Clone, Default)]
pub struct CheckOptions {
    pub budget: SearchBudget,
    /// Rules visible to this check only, consulted after the system's own.
    pub extra_rules: Vec<Rule>,
}

#[derive(Debug, Clone)]
struct Frame {
    depth: usize,
    opener: usize,
    show: bool,
    assumption: Option<Term>,
    closed: bool,
    /// Lines directly inside the frame, excluding nested frames.
    lines: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Row {
    /// Open frames at this line; `None` when the line breaks the layout.
    path: Option<Vec<usize>>,
    scope: Vec<Term>,
    status: LineStatus,
    message: String,
    witness: Option<BTreeMap<String, String>>,
}

impl Row {
    fn set(&mut self, status: LineStatus, message: impl Into<String>) {
        self.status = status;
        self.message = message.into();
    }
}

struct Checker<'a> {
    doc: &'a ProofDocument,
    system: &'a System,
    options: &'a CheckOptions,
    frames: Vec<Frame>,
    open: Vec<usize>,
    rows: Vec<Row>,
    premises: Vec<Term>,
    body_started: bool,
}

const DISCHARGES: &[&str] = &["DD", "CD", "ID"];

fn witness(theta: &crate::lambda::Substitution, contexts: &BTreeMap<u32, Vec<Term>>) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for (item, image) in theta.iter() {
        out.insert(print_item(item, Notation::ASCII), print(image, Notation::ASCII));
    }
    for (g, fs) in contexts {
        let shown: Vec<String> = fs.iter().map(|f| print(f, Notation::ASCII)).collect();
        out.insert(format!("G{g}"), shown.join(", "));
    }
    out
}

fn is_prefix(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

impl<'a> Checker<'a> {
    fn format(&self) -> ProofFormat {
        self.doc.format
    }

    fn show_rule(&self, s: usize) -> Option<String> {
        self.doc.lines[s].rule.as_ref().map(|r| self.system.resolve(r))
    }

    fn close_above(&mut self, depth: usize) {
        while let Some(&top) = self.open.last() {
            if self.frames[top].depth <= depth {
                break;
            }
            self.open.pop();
            self.frames[top].closed = true;
            if self.frames[top].show {
                self.discharge(top);
            }
        }
    }

    fn run(&mut self) {
        for i in 0..self.doc.lines.len() {
            self.line(i);
        }
        self.close_above(0);
    }

    fn line(&mut self, i: usize) {
        let line = &self.doc.lines[i];
        let d = line.depth;
        let mut row = Row {
            path: None,
            scope: Vec::new(),
            status: LineStatus::Correct,
            message: String::new(),
            witness: None,
        };
        if line.kind == LineKind::Separator {
            row.path = Some(self.open.clone());
            self.rows.push(row);
            return;
        }
        self.close_above(d);
        let layout = self.layout(i);
        if let Err(m) = &layout {
            row.set(LineStatus::ParseError, m.clone());
        }
        if layout.is_ok() {
            if let Some(&top) = self.open.last() {
                self.frames[top].lines.push(i);
            }
            row.path = Some(self.open.clone());
            if line.kind == LineKind::Premise && d == 0 && !self.body_started {
                if let Some(f) = &line.formula {
                    self.premises.push(f.clone());
                }
            }
            row.scope = self.premises.clone();
            for &f in &self.open {
                if let Some(a) = &self.frames[f].assumption {
                    row.scope.push(a.clone());
                }
            }
        }
        if !matches!(line.kind, LineKind::Premise) {
            self.body_started = true;
        }
        if let Some(e) = &line.error {
            row.set(LineStatus::ParseError, e.message.clone());
        }
        self.rows.push(row);
        if self.rows[i].status == LineStatus::Correct {
            self.judge(i);
        }
        if line.kind == LineKind::Show && layout.is_ok() && self.format() != ProofFormat::Fitch {
            self.frames.push(Frame {
                depth: d + 1,
                opener: i,
                show: true,
                assumption: None,
                closed: false,
                lines: Vec::new(),
            });
            self.open.push(self.frames.len() - 1);
        }
    }

    /// Places line `i` in the frame structure, opening a subproof for a
    /// Fitch assumption.
    fn layout(&mut self, i: usize) -> Result<(), String> {
        let line = &self.doc.lines[i];
        let d = line.depth;
        let level = self.open.len();
        match (self.format(), line.kind) {
            (ProofFormat::Fitch, LineKind::Assumption) => {
                if d == level && d >= 1 {
                    let top = self.open.pop().unwrap();
                    self.frames[top].closed = true;
                } else if d != level + 1 {
                    return Err(format!(
                        "an assumption opens a subproof at depth {}, not {d}",
                        level + 1
                    ));
                }
                self.frames.push(Frame {
                    depth: d,
                    opener: i,
                    show: false,
                    assumption: line.formula.clone(),
                    closed: false,
                    lines: Vec::new(),
                });
                self.open.push(self.frames.len() - 1);
                Ok(())
            }
            (_, _) if d > level => Err(match self.format() {
                ProofFormat::Fitch => format!("indented to depth {d} without an assumption"),
                _ => format!("indented to depth {d} without a Show line"),
            }),
            (ProofFormat::Fitch, _) => Ok(()),
            (_, LineKind::Assumption) => {
                let top = self.open.last().copied().filter(|&f| self.frames[f].lines.is_empty());
                match top {
                    Some(f) => {
                        self.frames[f].assumption = line.formula.clone();
                        Ok(())
                    }
                    None => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    fn judge(&mut self, i: usize) {
        let line = &self.doc.lines[i];
        match line.kind {
            LineKind::Separator | LineKind::Show => {}
            LineKind::Premise => {
                let misplaced = line.depth != 0
                    || self.doc.lines[..i]
                        .iter()
                        .any(|l| !matches!(l.kind, LineKind::Premise | LineKind::Separator));
                if misplaced {
                    self.rows[i].set(
                        LineStatus::RuleMismatch,
                        "premises come first, at the top level",
                    );
                }
            }
            LineKind::Assumption => {
                if self.format() != ProofFormat::Fitch {
                    if let Err(m) = self.block_assumption(i) {
                        self.rows[i].set(LineStatus::RuleMismatch, m);
                    }
                }
            }
            LineKind::Derived => self.derived(i),
        }
    }

    fn block_assumption(&self, i: usize) -> Result<(), String> {
        let line = &self.doc.lines[i];
        let frame = self
            .open
            .last()
            .map(|&f| &self.frames[f])
            .filter(|f| f.show && f.lines.first() == Some(&i))
            .ok_or("an assumption must be the first line under a Show line")?;
        let s = frame.opener;
        let goal = self.doc.lines[s]
            .formula
            .as_ref()
            .ok_or("the Show line above could not be read")?;
        let a = line.formula.as_ref().expect("judged lines have formulas");
        let marker = line.rule.as_deref().unwrap_or("");
        let rule = self.show_rule(s);
        let conditional = || match crate::syntax::decompose(goal) {
            Ok((head, args)) => head == LexicalItem::if_() && &args[0] == a,
            _ => false,
        };
        let indirect = || {
            let neg = |x: &Term, y: &Term| {
                matches!(crate::syntax::decompose(x), Ok((head, args)) if head == LexicalItem::neg() && &args[0] == y)
            };
            neg(a, goal) || neg(goal, a)
        };
        let for_cd = marker != "AID" && rule.as_deref() != Some("ID") && rule.as_deref() != Some("DD");
        let for_id = marker != "ACD" && rule.as_deref() != Some("CD") && rule.as_deref() != Some("DD");
        if rule.as_deref() == Some("DD") {
            return Err("a direct derivation takes no assumption".into());
        }
        if (for_cd && conditional()) || (for_id && indirect()) {
            return Ok(());
        }
        Err(match marker {
            "ACD" => "ACD assumes the antecedent of the conditional being shown".into(),
            "AID" => "AID assumes the negation of the formula being shown".into(),
            _ => "the assumption does not match the Show line".into(),
        })
    }

    /// The sequent established by a cited line, if it may be cited from `i`.
    fn cite_line(&self, i: usize, j: usize) -> Result<Sequent, (LineStatus, String)> {
        let inaccessible = |m: String| (LineStatus::InaccessibleLine, m);
        if j == 0 || j > i {
            return Err(inaccessible(format!("line {j} does not precede this line")));
        }
        let jj = j - 1;
        let here = self.rows[i].path.as_deref().unwrap_or(&[]);
        let cited = &self.doc.lines[jj];
        if cited.kind == LineKind::Separator {
            return Err(inaccessible(format!("line {j} is a separator")));
        }
        let path = self.rows[jj]
            .path
            .as_deref()
            .ok_or_else(|| inaccessible(format!("line {j} is outside the proof structure")))?;
        if !is_prefix(path, here) {
            return Err(inaccessible(match self.format() {
                ProofFormat::Fitch => format!("line {j} is inside a closed subproof"),
                _ => format!("line {j} is inside a closed Show block"),
            }));
        }
        if cited.kind == LineKind::Show {
            let open = self
                .frames
                .iter()
                .any(|f| f.show && f.opener == jj && !f.closed);
            if open {
                return Err(inaccessible(format!("line {j} is not yet shown")));
            }
            if self.rows[jj].status != LineStatus::Correct {
                return Err(inaccessible(format!("line {j} was never discharged")));
            }
        }
        let f = cited
            .formula
            .clone()
            .ok_or((LineStatus::RuleMismatch, format!("line {j} could not be read")))?;
        Ok(Sequent::instance(self.rows[jj].scope.clone(), f))
    }

    fn cite_range(&self, i: usize, m: usize, n: usize) -> Result<Sequent, (LineStatus, String)> {
        let inaccessible = |msg: String| (LineStatus::InaccessibleLine, msg);
        if self.format() != ProofFormat::Fitch {
            return Err(inaccessible(format!("{m}-{n}: ranges cite Fitch subproofs")));
        }
        if m == 0 || n < m || n > i {
            return Err(inaccessible(format!("{m}-{n} is not a subproof before this line")));
        }
        let here = self.rows[i].path.as_deref().unwrap_or(&[]);
        let (fid, frame) = self
            .frames
            .iter()
            .enumerate()
            .find(|(_, f)| !f.show && f.opener == m - 1)
            .ok_or_else(|| inaccessible(format!("line {m} does not open a subproof")))?;
        if !frame.closed {
            return Err(inaccessible(format!("the subproof at line {m} is still open")));
        }
        let inner = self.rows[m - 1].path.as_deref().unwrap_or(&[]);
        let parent = &inner[..inner.len() - 1];
        if !is_prefix(parent, here) || inner.last() != Some(&fid) {
            return Err(inaccessible(format!("the subproof at line {m} is not in scope")));
        }
        if self.rows[n - 1].path.as_deref() != Some(inner) {
            return Err(inaccessible(format!(
                "line {n} is not at the top level of the subproof at line {m}"
            )));
        }
        let f = self.doc.lines[n - 1]
            .formula
            .clone()
            .ok_or((LineStatus::RuleMismatch, format!("line {n} could not be read")))?;
        Ok(Sequent::instance(self.rows[n - 1].scope.clone(), f))
    }

    fn verdict(&mut self, i: usize, v: MatchVerdict) -> bool {
        let row = &mut self.rows[i];
        match v {
            MatchVerdict::Instance { theta, contexts, .. } => {
                row.set(LineStatus::Correct, "");
                row.witness = Some(witness(&theta, &contexts));
                true
            }
            MatchVerdict::NoMatch(d) => {
                let status = match d.kind {
                    DiagnosticKind::Eigenvariable => LineStatus::EigenvariableViolation,
                    DiagnosticKind::Mismatch => LineStatus::RuleMismatch,
                };
                row.set(status, d.message);
                false
            }
            MatchVerdict::Budget => {
                row.set(LineStatus::RuleMismatch, "search budget exhausted before a match was found");
                false
            }
        }
    }

    fn derived(&mut self, i: usize) {
        let line = &self.doc.lines[i];
        let cited = line.rule.clone().expect("derived lines carry a rule");
        let variants = self.system.lookup(&cited, &self.options.extra_rules);
        if variants.is_empty() {
            self.rows[i].set(
                LineStatus::NoSuchRule,
                format!("no rule named `{cited}` in {}", self.system.id),
            );
            return;
        }
        let name = self.system.resolve(&cited);
        if self.format() != ProofFormat::Fitch && DISCHARGES.contains(&name.as_str()) {
            self.rows[i].set(
                LineStatus::RuleMismatch,
                format!("{cited} justifies a Show line"),
            );
            return;
        }
        let mut premises = Vec::new();
        let mut failure: Option<(LineStatus, String)> = None;
        for c in &line.citations {
            let r = match *c {
                Citation::Line(j) => self.cite_line(i, j),
                Citation::Range(m, n) => self.cite_range(i, m, n),
            };
            match r {
                Ok(s) => premises.push(s),
                Err(e) => {
                    let worse = match &failure {
                        None => true,
                        Some((s, _)) => *s != LineStatus::InaccessibleLine,
                    };
                    if worse {
                        failure = Some(e);
                    }
                }
            }
        }
        if let Some((status, message)) = failure {
            self.rows[i].set(status, message);
            return;
        }
        let formula = line.formula.clone().expect("judged lines have formulas");
        let conclusion = Sequent::instance(self.rows[i].scope.clone(), formula);
        let v = crate::rules::check_variants(&variants, &premises, &conclusion, self.options.budget);
        self.verdict(i, v);
    }

    /// Decides a Show line once its block has closed.
    fn discharge(&mut self, fid: usize) {
        let s = self.frames[fid].opener;
        if self.rows[s].status != LineStatus::Correct {
            return;
        }
        let line = &self.doc.lines[s];
        let Some(cited) = line.rule.clone() else {
            self.rows[s].set(LineStatus::IncompleteSubproof, "Show line has no justification");
            return;
        };
        let variants = self.system.lookup(&cited, &self.options.extra_rules);
        if variants.is_empty() {
            self.rows[s].set(
                LineStatus::NoSuchRule,
                format!("no rule named `{cited}` in {}", self.system.id),
            );
            return;
        }
        if !DISCHARGES.contains(&self.system.resolve(&cited).as_str()) {
            self.rows[s].set(
                LineStatus::RuleMismatch,
                format!("{cited} does not discharge a Show line"),
            );
            return;
        }
        if !line.citations.is_empty() {
            self.rows[s].set(LineStatus::RuleMismatch, "a Show line cites no lines");
            return;
        }
        let goal = line.formula.clone().expect("judged lines have formulas");
        let conclusion = Sequent::instance(self.rows[s].scope.clone(), goal);
        let block = &self.frames[fid].lines;
        let candidates: Vec<usize> = block
            .iter()
            .copied()
            .filter(|&j| self.rows[j].status == LineStatus::Correct && self.doc.lines[j].formula.is_some())
            .collect();
        let last = block.last().copied();
        let strict = self.format() == ProofFormat::Hardegree;
        let mut counts: Vec<usize> = variants.iter().map(|r| r.premises.len()).collect();
        counts.sort_unstable();
        counts.dedup();
        let mut unfinished = false;
        for k in counts {
            for combo in candidates.iter().copied().combinations(k) {
                let premises: Vec<Sequent> = combo
                    .iter()
                    .map(|&j| {
                        Sequent::instance(
                            self.rows[j].scope.clone(),
                            self.doc.lines[j].formula.clone().unwrap(),
                        )
                    })
                    .collect();
                let v = crate::rules::check_variants(&variants, &premises, &conclusion, self.options.budget);
                if let MatchVerdict::Instance { theta, contexts, .. } = v {
                    if strict && !combo.iter().any(|&j| Some(j) == last) {
                        unfinished = true;
                        continue;
                    }
                    let row = &mut self.rows[s];
                    row.set(LineStatus::Correct, "");
                    row.witness = Some(witness(&theta, &contexts));
                    return;
                }
            }
        }
        let message = if unfinished {
            "the last line of the block must complete the derivation"
        } else if block.is_empty() {
            "Show line has no derivation under it"
        } else {
            "the lines under this Show line do not discharge it"
        };
        self.rows[s].set(LineStatus::IncompleteSubproof, message);
    }

    fn derived_sequent(&self) -> Option<Sequent> {
        let lines = &self.doc.lines;
        let last = match self.format() {
            ProofFormat::Fitch => lines
                .iter()
                .enumerate()
                .rev()
                .find(|(_, l)| l.kind != LineKind::Separator)
                .filter(|(_, l)| l.depth == 0),
            _ => lines
                .iter()
                .enumerate()
                .rev()
                .find(|(_, l)| l.kind != LineKind::Separator && l.depth == 0),
        }?;
        self.rows[last.0].path.as_ref()?;
        let f = last.1.formula.clone()?;
        Some(Sequent::instance(self.premises.clone(), f))
    }
}

fn meets(goal: &Sequent, derived: &Sequent) -> bool {
    goal.succedent == derived.succedent
        && derived.antecedent.iter().all(|a| goal.antecedent.contains(a))
}

/// Checks every line of `doc` against `system`.
pub fn check_proof_in(doc: &ProofDocument, system: &System, options: &CheckOptions) -> ProofReport {
    let mut c = Checker {
        doc,
        system,
        options,
        frames: Vec::new(),
        open: Vec::new(),
        rows: Vec::with_capacity(doc.lines.len()),
        premises: Vec::new(),
        body_started: false,
    };
    c.run();
    let derived_sequent = c.derived_sequent();
    let goal_met = doc
        .goal
        .as_ref()
        .map(|g| derived_sequent.as_ref().is_some_and(|d| meets(g, d)));
    let all_correct = c.rows.iter().all(|r| r.status == LineStatus::Correct);
    let complete = !doc.lines.is_empty()
        && all_correct
        && derived_sequent.is_some()
        && goal_met != Some(false);
    let lines: Vec<LineFeedback> = c
        .rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| LineFeedback {
            line: i + 1,
            source_line: doc.lines[i].source_line,
            status: r.status,
            message: r.message,
            witness: r.witness,
        })
        .collect();
    let rendered = render(doc, &lines);
    ProofReport {
        lines,
        complete,
        derived_sequent,
        goal_met,
        rendered,
    }
}
