//! Truth-functional semantics of the propositional fragment: evaluation,
//! truth tables in a canonical row order, validity, table grading and
//! translation checking.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Connective, Language, LexicalItem, LexiconModule, SentenceLetter, Term};

/// Exhaustive operations refuse more letters than this.
pub const MAX_LETTERS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("not a propositional formula")]
    NonPropositional,
    #[error("no truth value for {0}")]
    IncompleteAssignment(SentenceLetter),
    #[error("{count} sentence letters, at most {MAX_LETTERS} allowed")]
    TooManyLetters { count: usize },
    #[error("malformed submission: {0}")]
    MalformedSubmission(String),
    #[error("formula is not in language {0}")]
    LanguageMismatch(String),
}

pub type Assignment = BTreeMap<SentenceLetter, bool>;

pub fn eval(f: &Term, a: &Assignment) -> Result<bool, SemanticsError> {
    let (head, args) = f.spine();
    match (head.as_leaf(), args.as_slice()) {
        (Some(LexicalItem::Sentence(s)), []) => {
            a.get(s).copied().ok_or(SemanticsError::IncompleteAssignment(*s))
        }
        (Some(LexicalItem::Connective(Connective::Neg)), [x]) => Ok(!eval(x, a)?),
        (Some(LexicalItem::Connective(c)), [x, y]) => {
            let (x, y) = (eval(x, a)?, eval(y, a)?);
            Ok(match c {
                Connective::And => x && y,
                Connective::Or => x || y,
                Connective::If => !x || y,
                Connective::Iff => x == y,
                Connective::Neg => unreachable!(),
            })
        }
        _ => Err(SemanticsError::NonPropositional),
    }
}

/// Sentence letters of `formulas` in canonical order.
pub fn letters<'a>(formulas: impl IntoIterator<Item = &'a Term>) -> Vec<SentenceLetter> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.visit_leaves(&mut |i| {
            if let LexicalItem::Sentence(s) = i {
                out.insert(*s);
            }
        });
    }
    out.into_iter().collect()
}

/// Row `r` of the canonical order: the first letter varies slowest and
/// true comes before false.
pub fn row_assignment(letters: &[SentenceLetter], r: usize) -> Assignment {
    let n = letters.len();
    letters
        .iter()
        .enumerate()
        .map(|(i, l)| (*l, (r >> (n - 1 - i)) & 1 == 0))
        .collect()
}

fn check_letters(n: usize) -> Result<(), SemanticsError> {
    if n > MAX_LETTERS {
        Err(SemanticsError::TooManyLetters { count: n })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Validity {
    Valid,
    Invalid { witness: Vec<(String, bool)> },
}

fn named(a: &Assignment) -> Vec<(String, bool)> {
    a.iter().map(|(l, v)| (l.to_string(), *v)).collect()
}

pub fn validity(premises: &[Term], conclusion: &Term) -> Result<Validity, SemanticsError> {
    let ls = letters(premises.iter().chain([conclusion]));
    check_letters(ls.len())?;
    for r in 0..1usize << ls.len() {
        let a = row_assignment(&ls, r);
        let mut all = true;
        for p in premises {
            if !eval(p, &a)? {
                all = false;
                break;
            }
        }
        if all && !eval(conclusion, &a)? {
            return Ok(Validity::Invalid { witness: named(&a) });
        }
    }
    Ok(Validity::Valid)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub letters: Vec<SentenceLetter>,
    pub columns: Vec<Term>,
    /// Letter values then one cell per column, per canonical row.
    pub rows: Vec<Vec<bool>>,
}

impl TruthTable {
    pub fn build(columns: &[Term]) -> Result<Self, SemanticsError> {
        let ls = letters(columns);
        check_letters(ls.len())?;
        let mut rows = Vec::with_capacity(1 << ls.len());
        for r in 0..1usize << ls.len() {
            let a = row_assignment(&ls, r);
            let mut row: Vec<bool> = ls.iter().map(|l| a[l]).collect();
            for c in columns {
                row.push(eval(c, &a)?);
            }
            rows.push(row);
        }
        Ok(TruthTable {
            letters: ls,
            columns: columns.to_vec(),
            rows,
        })
    }

    /// Rows in the exchange format: one `T`/`F` character per cell.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|b| if *b { 'T' } else { 'F' }).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    Full,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSubmission {
    pub mode: TableMode,
    pub rows: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellError {
    pub row: usize,
    /// Letters first, then premises, then the conclusion.
    pub column: usize,
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableGrade {
    pub accepted: bool,
    pub cell_errors: Vec<CellError>,
    pub verdict_correct: bool,
    pub message: String,
}

fn parse_row(s: &str, row: usize) -> Result<Vec<bool>, SemanticsError> {
    s.chars()
        .map(|c| match c {
            'T' => Ok(true),
            'F' => Ok(false),
            other => Err(SemanticsError::MalformedSubmission(format!(
                "row {}: `{other}` is not T or F",
                row + 1
            ))),
        })
        .collect()
}

pub fn grade_table(
    premises: &[Term],
    conclusion: &Term,
    submission: &TableSubmission,
) -> Result<TableGrade, SemanticsError> {
    let mut columns = premises.to_vec();
    columns.push(conclusion.clone());
    let table = TruthTable::build(&columns)?;
    let n = table.letters.len();
    let width = n + columns.len();
    let actual = match validity(premises, conclusion)? {
        Validity::Valid => Verdict::Valid,
        Validity::Invalid { .. } => Verdict::Invalid,
    };
    match submission.mode {
        TableMode::Full => {
            if submission.rows.len() != table.rows.len() {
                return Err(SemanticsError::MalformedSubmission(format!(
                    "expected {} rows, got {}",
                    table.rows.len(),
                    submission.rows.len()
                )));
            }
            let mut cell_errors = Vec::new();
            for (r, (claimed, truth)) in submission.rows.iter().zip(&table.rows).enumerate() {
                let claimed = parse_row(claimed, r)?;
                if claimed.len() != width {
                    return Err(SemanticsError::MalformedSubmission(format!(
                        "row {}: expected {width} cells, got {}",
                        r + 1,
                        claimed.len()
                    )));
                }
                for (c, (got, want)) in claimed.iter().zip(truth).enumerate() {
                    if got != want {
                        cell_errors.push(CellError {
                            row: r,
                            column: c,
                            expected: *want,
                        });
                    }
                }
            }
            let verdict_correct = submission.verdict == actual;
            let message = match (cell_errors.len(), verdict_correct) {
                (0, true) => "correct".to_string(),
                (0, false) => "every cell is right but the verdict is wrong".to_string(),
                (k, _) => format!("{k} incorrect cell(s)"),
            };
            Ok(TableGrade {
                accepted: cell_errors.is_empty() && verdict_correct,
                cell_errors,
                verdict_correct,
                message,
            })
        }
        TableMode::Counterexample => {
            if submission.rows.is_empty() {
                let verdict_correct = submission.verdict == actual;
                let message = match (submission.verdict, actual) {
                    (Verdict::Valid, Verdict::Valid) => "correct",
                    (Verdict::Invalid, Verdict::Invalid) => "give a counterexample row",
                    (_, Verdict::Invalid) => "the argument is invalid",
                    (_, Verdict::Valid) => "a valid argument has no counterexample",
                };
                return Ok(TableGrade {
                    accepted: actual == Verdict::Valid && verdict_correct,
                    cell_errors: Vec::new(),
                    verdict_correct,
                    message: message.into(),
                });
            }
            let [row] = submission.rows.as_slice() else {
                return Err(SemanticsError::MalformedSubmission(
                    "a counterexample is a single row".into(),
                ));
            };
            let claimed = parse_row(row, 0)?;
            if claimed.len() != n && claimed.len() != width {
                return Err(SemanticsError::MalformedSubmission(format!(
                    "expected {n} or {width} cells, got {}",
                    claimed.len()
                )));
            }
            let a: Assignment = table.letters.iter().copied().zip(claimed.iter().copied()).collect();
            let values: Vec<bool> = columns.iter().map(|c| eval(c, &a)).collect::<Result<_, _>>()?;
            let mut cell_errors = Vec::new();
            if claimed.len() == width {
                for (k, (got, want)) in claimed[n..].iter().zip(&values).enumerate() {
                    if got != want {
                        cell_errors.push(CellError {
                            row: 0,
                            column: n + k,
                            expected: *want,
                        });
                    }
                }
            }
            let (prem_vals, concl_val) = values.split_at(premises.len());
            let false_premise = prem_vals.iter().position(|v| !v);
            let is_counterexample = false_premise.is_none() && !concl_val[0];
            let verdict_correct = submission.verdict == Verdict::Invalid && actual == Verdict::Invalid;
            let message = if let Some(k) = false_premise {
                format!("premise {} is false in this row", k + 1)
            } else if concl_val[0] {
                "premises true but conclusion true".to_string()
            } else if !cell_errors.is_empty() {
                format!("{} incorrect cell(s)", cell_errors.len())
            } else if submission.verdict != Verdict::Invalid {
                "a counterexample shows the argument invalid".to_string()
            } else {
                "correct".to_string()
            };
            Ok(TableGrade {
                accepted: is_counterexample && cell_errors.is_empty() && verdict_correct,
                cell_errors,
                verdict_correct,
                message,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TranslationVerdict {
    Correct,
    EquivalentNotIdentical,
    Incorrect,
}

impl TranslationVerdict {
    pub fn passes(self, equivalent_passes: bool) -> bool {
        match self {
            TranslationVerdict::Correct => true,
            TranslationVerdict::EquivalentNotIdentical => equivalent_passes,
            TranslationVerdict::Incorrect => false,
        }
    }
}

/// Propositional translations are judged up to truth-table equivalence;
/// first-order ones must agree up to bound-variable names.
pub fn check_translation(
    lang: &Language,
    submitted: &Term,
    reference: &Term,
) -> Result<TranslationVerdict, SemanticsError> {
    for f in [submitted, reference] {
        if !f.is_formula() || !lang.well_formed(f) {
            return Err(SemanticsError::LanguageMismatch(lang.id().to_string()));
        }
    }
    if submitted == reference {
        return Ok(TranslationVerdict::Correct);
    }
    if lang.admits_module(LexiconModule::Quantifiers) {
        return Ok(TranslationVerdict::Incorrect);
    }
    let ls = letters([submitted, reference]);
    check_letters(ls.len())?;
    for r in 0..1usize << ls.len() {
        let a = row_assignment(&ls, r);
        if eval(submitted, &a)? != eval(reference, &a)? {
            return Ok(TranslationVerdict::Incorrect);
        }
    }
    Ok(TranslationVerdict::EquivalentNotIdentical)
}
