use crate::notation::{FormulaParser, Notation, ParseError};
use crate::rules::{ProofFormat, Sequent};
use crate::syntax::{Language, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Premise,
    Assumption,
    Show,
    Derived,
    Separator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Citation {
    Line(usize),
    Range(usize, usize),
}

impl Citation {
    pub fn text(&self) -> String {
        match self {
            Citation::Line(n) => n.to_string(),
            Citation::Range(m, n) => format!("{m}-{n}"),
        }
    }
}

/// A problem found while reading a line, before any rule is consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineParseError {
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    /// 1-based position among the non-blank lines.
    pub number: usize,
    /// 1-based line of the source text.
    pub source_line: usize,
    pub depth: usize,
    pub kind: LineKind,
    pub text: String,
    /// Formula text as written, without any `Show` prefix.
    pub formula_text: String,
    pub formula: Option<Term>,
    pub rule: Option<String>,
    pub citations: Vec<Citation>,
    pub error: Option<LineParseError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDocument {
    pub format: ProofFormat,
    pub system: String,
    pub language: Language,
    pub lines: Vec<ProofLine>,
    pub goal: Option<Sequent>,
}

const ASSUMPTION_MARKERS: &[&str] = &["AS", "As", "ACD", "AID"];

pub(crate) fn is_assumption_marker(rule: &str) -> bool {
    ASSUMPTION_MARKERS.contains(&rule)
}

/// Splits off the leading line number and measures indentation.
fn layout(raw: &str) -> (Option<usize>, usize, &str) {
    let trimmed = raw.trim_start();
    let digits: String = trimmed.chars().take_while(|c| c.is_ascii_digit()).collect();
    if !digits.is_empty() {
        if let Some(rest) = trimmed[digits.len()..].strip_prefix('.') {
            let spaces = rest.chars().take_while(|c| *c == ' ').count();
            let n = digits.parse().ok();
            return (n, spaces.saturating_sub(1), rest.trim_start());
        }
    }
    let width: usize = raw
        .chars()
        .take_while(|c| c.is_whitespace())
        .map(|c| if c == '\t' { 4 } else { 1 })
        .sum();
    (None, width / 4, trimmed)
}

fn parse_citations(text: &str) -> Result<Vec<Citation>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| format!("`{}` is not a line number", s.trim()))
    };
    text.split(',')
        .map(|part| match part.split_once('-') {
            Some((a, b)) => Ok(Citation::Range(num(a)?, num(b)?)),
            None => Ok(Citation::Line(num(part)?)),
        })
        .collect()
}

fn strip_show(body: &str) -> Option<&str> {
    let head: String = body.chars().take(4).collect();
    if head.eq_ignore_ascii_case("show") {
        let rest = &body[head.len()..];
        if rest.is_empty() || rest.starts_with(char::is_whitespace) {
            return Some(rest.trim_start());
        }
    }
    None
}

/// Reads a proof text. Every non-blank line becomes a `ProofLine`; problems
/// are recorded on the line rather than aborting.
pub fn parse_proof(format: ProofFormat, system: &str, language: &Language, text: &str) -> ProofDocument {
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let number = lines.len() + 1;
        let mut line = parse_line(format, language, raw, number);
        line.source_line = k + 1;
        lines.push(line);
    }
    ProofDocument {
        format,
        system: system.to_string(),
        language: language.clone(),
        lines,
        goal: None,
    }
}

fn parse_line(format: ProofFormat, language: &Language, raw: &str, number: usize) -> ProofLine {
    let (explicit, depth, body) = layout(raw);
    let mut line = ProofLine {
        number,
        source_line: number,
        depth,
        kind: LineKind::Derived,
        text: raw.to_string(),
        formula_text: String::new(),
        formula: None,
        rule: None,
        citations: Vec::new(),
        error: None,
    };
    let fail = |line: &mut ProofLine, m: String| {
        if line.error.is_none() {
            line.error = Some(LineParseError { message: m });
        }
    };
    if let Some(n) = explicit {
        if n != number {
            fail(&mut line, format!("line is numbered {n} but is line {number}"));
        }
    }
    if !body.is_empty() && body.chars().all(|c| c == '-') {
        line.kind = LineKind::Separator;
        return line;
    }
    let (formula_part, justification) = match body.split_once(':') {
        Some((f, j)) => (f.trim(), Some(j.trim())),
        None => (body.trim(), None),
    };
    let (formula_part, is_show) = match strip_show(formula_part) {
        Some(rest) => (rest, true),
        None => (formula_part, false),
    };
    line.formula_text = formula_part.to_string();
    if is_show {
        line.kind = LineKind::Show;
        if format == ProofFormat::Fitch {
            fail(&mut line, "Show lines are not part of Fitch proofs".into());
        }
    }
    match justification {
        Some(j) => {
            let (rule, rest) = match j.split_once(char::is_whitespace) {
                Some((r, rest)) => (r, rest),
                None => (j, ""),
            };
            if rule.is_empty() {
                fail(&mut line, "missing rule after `:`".into());
            } else {
                line.rule = Some(rule.to_string());
                if !is_show {
                    if rule == "PR" {
                        line.kind = LineKind::Premise;
                    } else if is_assumption_marker(rule) {
                        line.kind = LineKind::Assumption;
                    }
                }
            }
            match parse_citations(rest) {
                Ok(c) => line.citations = c,
                Err(m) => fail(&mut line, m),
            }
        }
        None if is_show => {}
        None => fail(&mut line, "missing justification `:RULE`".into()),
    }
    if formula_part.is_empty() {
        fail(&mut line, "missing formula".into());
    } else {
        match FormulaParser::new(language, Notation::ASCII).parse(formula_part) {
            Ok(t) => line.formula = Some(t),
            Err(e) => fail(&mut line, describe_parse_error(&e)),
        }
    }
    line
}

pub(crate) fn describe_parse_error(e: &ParseError) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURRYING: &str = "1. (P/\\Q)->R :PR\n2.  P :AS\n3.   Q :AS\n4.   P/\\Q :&I 2,3\n5.   R :->E 1,4\n6.  Q->R :->I 3-5\n7. P->(Q->R) :->I 2-6";

    #[test]
    fn fitch_depths() {
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), CURRYING);
        let depths: Vec<usize> = doc.lines.iter().map(|l| l.depth).collect();
        assert_eq!(depths, vec![0, 1, 2, 2, 2, 1, 0]);
        assert_eq!(doc.lines[0].kind, LineKind::Premise);
        assert_eq!(doc.lines[1].kind, LineKind::Assumption);
        assert_eq!(doc.lines[5].citations, vec![Citation::Range(3, 5)]);
        assert_eq!(doc.lines[4].citations, vec![Citation::Line(1), Citation::Line(4)]);
        assert!(doc.lines.iter().all(|l| l.error.is_none()));
    }

    #[test]
    fn fault_isolation() {
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), "1. P/\\ :PR\n2. Q :PR");
        assert!(doc.lines[0].error.is_some());
        assert!(doc.lines[1].error.is_none());
        assert!(parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), "").lines.is_empty());
    }

    #[test]
    fn unnumbered_lines_indent_by_four() {
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), "P :PR\n    Q :AS\n        R :AS");
        let depths: Vec<usize> = doc.lines.iter().map(|l| l.depth).collect();
        assert_eq!(depths, vec![0, 1, 2]);
    }

    #[test]
    fn show_lines() {
        let doc = parse_proof(
            ProofFormat::Montague,
            "prop-montague",
            &Language::prop(),
            "1. Show P->P :CD\n2.  P :ACD\n3. show Q",
        );
        assert_eq!(doc.lines[0].kind, LineKind::Show);
        assert_eq!(doc.lines[0].rule.as_deref(), Some("CD"));
        assert_eq!(doc.lines[2].kind, LineKind::Show);
        assert_eq!(doc.lines[2].rule, None);
        assert!(doc.lines[2].error.is_none());
    }

    #[test]
    fn numbering_must_be_sequential() {
        let doc = parse_proof(ProofFormat::Fitch, "prop-fitch", &Language::prop(), "1. P :PR\n3. Q :PR");
        assert!(doc.lines[1].error.is_some());
    }
}
