use crate::notation::{tokenize, Cursor, FormulaParser, Glyphs, Notation, ParseError, Tok};
use crate::syntax::{Language, LexicalItem};

use super::{Rule, RuleError, Sequent};

fn ill_formed(rule: &str, detail: impl ToString) -> RuleError {
    RuleError::IllFormedSchema {
        rule: rule.to_string(),
        detail: detail.to_string(),
    }
}

/// Parses `premise; premise => conclusion [fresh: tau1]` where each
/// sequent is `G1, phi1 |- phi2`.
pub fn parse_rule(lang: &Language, name: &str, text: &str) -> Result<Rule, RuleError> {
    let (body, side) = match text.split_once('[') {
        Some((b, s)) => (b, Some(s)),
        None => (text, None),
    };
    let schematic = lang.schematic();
    let mut parser = FormulaParser::new(&schematic, Notation::ASCII);
    let (premises, conclusion) = parse_body(&mut parser, body).map_err(|e| ill_formed(name, e))?;
    let mut fresh = Vec::new();
    if let Some(side) = side {
        let inner = side
            .trim()
            .strip_suffix(']')
            .and_then(|s| s.trim().strip_prefix("fresh:"))
            .ok_or_else(|| ill_formed(name, "side condition must read `[fresh: tau1]`"))?;
        for part in inner.split(',') {
            let t = parser.parse_term(part.trim()).map_err(|e| ill_formed(name, e))?;
            match t.as_leaf() {
                Some(item @ LexicalItem::Tau { .. }) => fresh.push(item.clone()),
                _ => return Err(ill_formed(name, "only term schemas can be fresh")),
            }
        }
    }
    Rule::new(name, premises, conclusion, fresh)
}

fn parse_body(parser: &mut FormulaParser, text: &str) -> Result<(Vec<Sequent>, Sequent), ParseError> {
    let (toks, end) = tokenize(text)?;
    let mut c = Cursor {
        toks: &toks,
        at: 0,
        end,
    };
    let mut premises = Vec::new();
    if !c.at_tok(&Tok::Yields) {
        loop {
            premises.push(sequent(parser, &mut c)?);
            if c.at_tok(&Tok::Semicolon) {
                c.bump();
                continue;
            }
            break;
        }
    }
    c.expect(Tok::Yields, "`=>`")?;
    let conclusion = sequent(parser, &mut c)?;
    if let Some(s) = c.peek() {
        return Err(ParseError::Syntax {
            position: s.pos,
            expected: "end of schema".into(),
            found: s.tok.describe(),
        });
    }
    Ok((premises, conclusion))
}

fn sequent(parser: &mut FormulaParser, c: &mut Cursor<'_>) -> Result<Sequent, ParseError> {
    let mut contexts = Vec::new();
    let mut antecedent = Vec::new();
    if !c.at_tok(&Tok::Turnstile) {
        loop {
            match c.peek().map(|s| &s.tok) {
                Some(Tok::Ctx(n)) => {
                    contexts.push(*n);
                    c.bump();
                }
                _ => antecedent.push(parser.formula(c)?),
            }
            if c.at_tok(&Tok::Comma) {
                c.bump();
                continue;
            }
            break;
        }
    }
    c.expect(Tok::Turnstile, "`|-`")?;
    let succedent = parser.formula(c)?;
    Ok(Sequent {
        contexts,
        antecedent,
        succedent,
    })
}

/// Parses an instance sequent `A1, .., An |- B`; a bare formula is read as
/// `|- B`.
pub fn parse_sequent(lang: &Language, text: &str) -> Result<Sequent, ParseError> {
    let (toks, end) = tokenize(text)?;
    let mut parser = FormulaParser::new(lang, Notation::ASCII);
    let mut c = Cursor {
        toks: &toks,
        at: 0,
        end,
    };
    let s = if toks.iter().any(|t| t.tok == Tok::Turnstile) {
        sequent(&mut parser, &mut c)?
    } else {
        Sequent::instance(Vec::new(), parser.formula(&mut c)?)
    };
    if let Some(t) = c.peek() {
        return Err(ParseError::Syntax {
            position: t.pos,
            expected: "end of sequent".into(),
            found: t.tok.describe(),
        });
    }
    if !s.contexts.is_empty() {
        return Err(ParseError::Syntax {
            position: 0,
            expected: "a formula".into(),
            found: "a context variable".into(),
        });
    }
    Ok(s)
}

pub(super) fn print_sequent(s: &Sequent, notation: Notation) -> String {
    let unicode = notation.glyphs == Glyphs::Unicode;
    let mut parts: Vec<String> = s
        .contexts
        .iter()
        .map(|n| if unicode { format!("Γ{n}") } else { format!("G{n}") })
        .collect();
    parts.extend(s.antecedent.iter().map(|f| crate::notation::print(f, notation)));
    let turnstile = if unicode { "⊢" } else { "|-" };
    let succ = crate::notation::print(&s.succedent, notation);
    if parts.is_empty() {
        format!("{turnstile} {succ}")
    } else {
        format!("{} {turnstile} {succ}", parts.join(", "))
    }
}

pub(super) fn print_rule(r: &Rule, notation: Notation) -> String {
    let premises: Vec<String> = r.premises.iter().map(|p| print_sequent(p, notation)).collect();
    let mut out = if premises.is_empty() {
        format!("=> {}", print_sequent(&r.conclusion, notation))
    } else {
        format!("{} => {}", premises.join("; "), print_sequent(&r.conclusion, notation))
    };
    if !r.fresh.is_empty() {
        let names: Vec<String> = r
            .fresh
            .iter()
            .map(|t| crate::notation::print_item(t, notation))
            .collect();
        out.push_str(&format!(" [fresh: {}]", names.join(", ")));
    }
    out
}
