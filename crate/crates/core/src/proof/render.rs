use crate::notation::{print, Notation};
use crate::rules::ProofFormat;

use super::check::{LineFeedback, LineStatus, ProofReport};
use super::document::{LineKind, ProofDocument};

fn justification(line: &super::ProofLine) -> String {
    let Some(rule) = &line.rule else {
        return String::new();
    };
    let cites: Vec<String> = line.citations.iter().map(|c| c.text()).collect();
    if cites.is_empty() {
        rule.clone()
    } else {
        format!("{rule} {}", cites.join(", "))
    }
}

/// Textbook layout: numbered lines, one bar per level of nesting, a rule
/// under premises and assumptions, justifications in a right-hand column.
pub(crate) fn render(doc: &ProofDocument, feedback: &[LineFeedback]) -> String {
    let lines: Vec<_> = doc
        .lines
        .iter()
        .zip(feedback)
        .filter(|(l, _)| l.kind != LineKind::Separator)
        .collect();
    let width = doc.lines.len().to_string().len();
    let fitch = doc.format == ProofFormat::Fitch;
    let bars = |depth: usize| {
        let n = if fitch { depth + 1 } else { depth };
        "│ ".repeat(n)
    };
    let bodies: Vec<String> = lines
        .iter()
        .map(|(l, _)| {
            let f = match &l.formula {
                Some(t) => print(t, Notation::UNICODE),
                None => l.formula_text.clone(),
            };
            let f = if l.kind == LineKind::Show { format!("Show {f}") } else { f };
            format!("{}{f}", bars(l.depth))
        })
        .collect();
    let column = bodies.iter().map(|b| b.chars().count()).max().unwrap_or(0) + 3;
    let mut out = String::new();
    for (k, ((line, fb), body)) in lines.iter().zip(&bodies).enumerate() {
        let just = justification(line);
        let mark = if fb.status == LineStatus::Correct { "" } else { "  ✗" };
        let pad = column - body.chars().count();
        let text = format!("{:>width$} {body}{}{just}{mark}", line.number, " ".repeat(pad));
        out.push_str(text.trim_end());
        out.push('\n');
        if !fitch {
            continue;
        }
        let next = lines.get(k + 1).map(|(l, _)| l.kind);
        let rule_under = match line.kind {
            LineKind::Assumption => true,
            LineKind::Premise => next != Some(LineKind::Premise),
            _ => false,
        };
        if rule_under {
            out.push_str(&format!("{} {}├───\n", " ".repeat(width), "│ ".repeat(line.depth)));
        }
    }
    out
}

/// Plain-text feedback: one line per proof line, then the verdict.
pub fn feedback_text(report: &ProofReport) -> String {
    let mut out = String::new();
    for fb in &report.lines {
        if fb.status == LineStatus::Correct {
            out.push_str(&format!("{:>3} +\n", fb.line));
        } else {
            out.push_str(&format!("{:>3} x {}: {}\n", fb.line, fb.status.name(), fb.message));
        }
    }
    out.push_str(&format!("complete: {}\n", report.complete));
    match &report.derived_sequent {
        Some(s) => out.push_str(&format!("derived: {}\n", s.display(Notation::ASCII))),
        None => out.push_str("derived: none\n"),
    }
    if let Some(met) = report.goal_met {
        out.push_str(&format!("goal: {}\n", if met { "met" } else { "not met" }));
    }
    out
}
