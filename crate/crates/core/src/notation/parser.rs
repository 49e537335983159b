use std::collections::HashMap;

use crate::syntax::{Connective, Language, LexicalItem, Term};

use super::lexer::{tokenize, Spanned, Tok, VARIABLE_LETTERS};
use super::{Mode, Notation, ParseError};

pub(crate) const SENTENCE_LETTERS: &[char] = &['P', 'Q', 'R', 'S'];
pub(crate) const PREDICATE_LETTERS: &[char] = &['F', 'G', 'H', 'P', 'Q', 'R', 'S'];
pub(crate) const CONSTANT_LETTERS: &[char] = &['a', 'b', 'c', 'd', 'e'];
pub(crate) const FUNCTION_LETTERS: &[char] = &['f', 'g', 'h'];
pub const MAX_ARITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ArityKey {
    Predicate(char),
    Function(char),
    Phi(u32),
}

/// Parses formulas, remembering the arity of each predicate, function
/// symbol and schematic formula variable at its first use.
#[derive(Debug, Clone)]
pub struct FormulaParser {
    lang: Language,
    notation: Notation,
    arities: HashMap<ArityKey, usize>,
}

impl FormulaParser {
    pub fn new(lang: &Language, notation: Notation) -> Self {
        FormulaParser {
            lang: lang.clone(),
            notation,
            arities: HashMap::new(),
        }
    }

    pub fn language(&self) -> &Language {
        &self.lang
    }

    pub fn parse(&mut self, text: &str) -> Result<Term, ParseError> {
        let (toks, end) = tokenize(text)?;
        let mut cursor = Cursor {
            toks: &toks,
            at: 0,
            end,
        };
        let t = self.formula(&mut cursor)?;
        if let Some(tok) = cursor.peek() {
            return Err(ParseError::Syntax {
                position: tok.pos,
                expected: "end of input".into(),
                found: tok.tok.describe(),
            });
        }
        Ok(t)
    }

    /// Parses an individual term such as `f(a,x)`.
    pub fn parse_term(&mut self, text: &str) -> Result<Term, ParseError> {
        let (toks, end) = tokenize(text)?;
        let mut cursor = Cursor {
            toks: &toks,
            at: 0,
            end,
        };
        let t = self.term(&mut cursor)?;
        if let Some(tok) = cursor.peek() {
            return Err(ParseError::Syntax {
                position: tok.pos,
                expected: "end of input".into(),
                found: tok.tok.describe(),
            });
        }
        Ok(t)
    }

    pub(crate) fn formula(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        match self.notation.mode {
            Mode::Fixity => self.iff(c),
            Mode::Strict => self.strict(c),
        }
    }

    fn iff(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let lhs = self.cond(c)?;
        if c.eat_conn(Connective::Iff) {
            let rhs = self.iff(c)?;
            return Ok(binary(Connective::Iff, lhs, rhs));
        }
        Ok(lhs)
    }

    fn cond(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let lhs = self.disj(c)?;
        if c.eat_conn(Connective::If) {
            let rhs = self.cond(c)?;
            return Ok(binary(Connective::If, lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let mut lhs = self.conj(c)?;
        while c.eat_conn(Connective::Or) {
            let rhs = self.conj(c)?;
            lhs = binary(Connective::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let mut lhs = self.prefix(c)?;
        while c.eat_conn(Connective::And) {
            let rhs = self.prefix(c)?;
            lhs = binary(Connective::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        match c.peek().map(|s| s.tok.clone()) {
            Some(Tok::Conn(Connective::Neg)) => {
                let pos = c.bump().pos;
                self.require(&LexicalItem::neg(), pos, "~")?;
                let body = self.prefix(c)?;
                Ok(unary(body))
            }
            Some(Tok::Quant(_)) => self.quantified(c, Self::prefix),
            Some(Tok::LParen) => {
                c.bump();
                let inner = self.iff(c)?;
                c.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.atom(c),
        }
    }

    // Every binary application is parenthesized.
    fn strict(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        match c.peek().map(|s| s.tok.clone()) {
            Some(Tok::Conn(Connective::Neg)) => {
                let pos = c.bump().pos;
                self.require(&LexicalItem::neg(), pos, "~")?;
                let body = self.strict(c)?;
                Ok(unary(body))
            }
            Some(Tok::Quant(_)) => self.quantified(c, Self::strict),
            Some(Tok::LParen) => {
                c.bump();
                let lhs = self.strict(c)?;
                let op = match c.peek().map(|s| s.tok.clone()) {
                    Some(Tok::Conn(op)) if op != Connective::Neg => {
                        let pos = c.bump().pos;
                        self.require(&LexicalItem::Connective(op), pos, op.ascii())?;
                        Some(op)
                    }
                    _ => None,
                };
                let t = match op {
                    Some(op) => {
                        let rhs = self.strict(c)?;
                        binary(op, lhs, rhs)
                    }
                    None => lhs,
                };
                c.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.atom(c),
        }
    }

    fn quantified(
        &mut self,
        c: &mut Cursor<'_>,
        body: fn(&mut Self, &mut Cursor<'_>) -> Result<Term, ParseError>,
    ) -> Result<Term, ParseError> {
        let s = c.bump();
        let Tok::Quant(q) = s.tok else { unreachable!() };
        let item = LexicalItem::Quantifier(q);
        self.require(&item, s.pos, q.ascii())?;
        let var = match c.peek() {
            Some(Spanned {
                tok: Tok::Lower(v, idx),
                ..
            }) if VARIABLE_LETTERS.contains(v) => name_of(*v, *idx),
            other => {
                return Err(ParseError::Syntax {
                    position: other.map(|s| s.pos).unwrap_or(c.end),
                    expected: "a variable after the quantifier".into(),
                    found: describe(other),
                })
            }
        };
        c.bump();
        let inner = body(self, c)?;
        let lam = inner.abstract_over(&LexicalItem::Variable(var.clone()), &var);
        Ok(Term::app_unchecked(Term::leaf(item), lam))
    }

    fn atom(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let Some(s) = c.peek().cloned() else {
            return Err(ParseError::Syntax {
                position: c.end,
                expected: "a formula".into(),
                found: "end of input".into(),
            });
        };
        match s.tok {
            Tok::Upper(name, idx) => {
                c.bump();
                if c.at_tok(&Tok::LParen) {
                    if idx.is_some() || !PREDICATE_LETTERS.contains(&name) {
                        return Err(unknown(&s));
                    }
                    self.require(&LexicalItem::predicate(name, 1), s.pos, &name.to_string())?;
                    let args = self.arguments(c)?;
                    let arity = self.arity(ArityKey::Predicate(name), args.len(), &s)?;
                    let item = LexicalItem::predicate(name, arity as u8);
                    self.require(&item, s.pos, &name.to_string())?;
                    Ok(Term::apply_unchecked(Term::leaf(item), args))
                } else {
                    let item = match (name, idx) {
                        ('P', Some(n)) => LexicalItem::sentence(n),
                        (l, None) if SENTENCE_LETTERS.contains(&l) => LexicalItem::letter(l),
                        _ => return Err(unknown(&s)),
                    };
                    self.require(&item, s.pos, &s.tok.describe())?;
                    Ok(Term::leaf(item))
                }
            }
            Tok::Phi(n) => {
                c.bump();
                let args = if c.at_tok(&Tok::LParen) {
                    self.arguments(c)?
                } else {
                    Vec::new()
                };
                let arity = self.arity(ArityKey::Phi(n), args.len(), &s)?;
                let item = LexicalItem::phi(n, arity);
                self.require(&item, s.pos, &format!("phi{n}"))?;
                Ok(Term::apply_unchecked(Term::leaf(item), args))
            }
            _ => Err(ParseError::Syntax {
                position: s.pos,
                expected: "a formula".into(),
                found: s.tok.describe(),
            }),
        }
    }

    fn arguments(&mut self, c: &mut Cursor<'_>) -> Result<Vec<Term>, ParseError> {
        c.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term(c)?];
        while c.at_tok(&Tok::Comma) {
            c.bump();
            args.push(self.term(c)?);
        }
        c.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    fn term(&mut self, c: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let Some(s) = c.peek().cloned() else {
            return Err(ParseError::Syntax {
                position: c.end,
                expected: "a term".into(),
                found: "end of input".into(),
            });
        };
        c.bump();
        let item = match s.tok {
            Tok::Lower(v, idx) if VARIABLE_LETTERS.contains(&v) => {
                LexicalItem::Variable(name_of(v, idx))
            }
            Tok::Lower(k, idx) if CONSTANT_LETTERS.contains(&k) => {
                LexicalItem::Constant(name_of(k, idx))
            }
            Tok::Lower(f, None) if FUNCTION_LETTERS.contains(&f) => {
                let args = if c.at_tok(&Tok::LParen) {
                    self.arguments(c)?
                } else {
                    return Err(ParseError::Syntax {
                        position: c.peek().map(|t| t.pos).unwrap_or(c.end),
                        expected: "`(` after a function symbol".into(),
                        found: describe(c.peek()),
                    });
                };
                let arity = self.arity(ArityKey::Function(f), args.len(), &s)?;
                let item = LexicalItem::function(f, arity as u8);
                self.require(&item, s.pos, &f.to_string())?;
                return Ok(Term::apply_unchecked(Term::leaf(item), args));
            }
            Tok::Tau(n) => LexicalItem::tau(n),
            Tok::Lower(..) => return Err(unknown(&s)),
            _ => {
                return Err(ParseError::Syntax {
                    position: s.pos,
                    expected: "a term".into(),
                    found: s.tok.describe(),
                })
            }
        };
        self.require(&item, s.pos, &s.tok.describe())?;
        Ok(Term::leaf(item))
    }

    fn arity(&mut self, key: ArityKey, found: usize, at: &Spanned) -> Result<usize, ParseError> {
        if found > MAX_ARITY {
            return Err(ParseError::ArityMismatch {
                position: at.pos,
                symbol: at.tok.describe(),
                expected: MAX_ARITY,
                found,
            });
        }
        match self.arities.get(&key) {
            Some(&expected) if expected != found => Err(ParseError::ArityMismatch {
                position: at.pos,
                symbol: at.tok.describe(),
                expected,
                found,
            }),
            _ => {
                self.arities.insert(key, found);
                Ok(found)
            }
        }
    }

    fn require(&self, item: &LexicalItem, pos: usize, sym: &str) -> Result<(), ParseError> {
        if self.lang.admits(item) {
            Ok(())
        } else {
            Err(ParseError::UnknownSymbol {
                position: pos,
                symbol: sym.trim_matches('`').to_string(),
            })
        }
    }
}

fn name_of(c: char, idx: Option<u32>) -> String {
    match idx {
        Some(n) => format!("{c}_{n}"),
        None => c.to_string(),
    }
}

fn unknown(s: &Spanned) -> ParseError {
    ParseError::UnknownSymbol {
        position: s.pos,
        symbol: s.tok.describe().trim_matches('`').to_string(),
    }
}

fn describe(s: Option<&Spanned>) -> String {
    s.map(|s| s.tok.describe())
        .unwrap_or_else(|| "end of input".into())
}

fn binary(op: Connective, l: Term, r: Term) -> Term {
    Term::apply_unchecked(Term::leaf(LexicalItem::Connective(op)), [l, r])
}

fn unary(t: Term) -> Term {
    Term::app_unchecked(Term::leaf(LexicalItem::neg()), t)
}

pub(crate) struct Cursor<'a> {
    pub toks: &'a [Spanned],
    pub at: usize,
    pub end: usize,
}

impl<'a> Cursor<'a> {
    pub fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.at)
    }

    pub fn bump(&mut self) -> &'a Spanned {
        let t = &self.toks[self.at];
        self.at += 1;
        t
    }

    pub fn at_tok(&self, tok: &Tok) -> bool {
        self.peek().is_some_and(|s| &s.tok == tok)
    }

    fn eat_conn(&mut self, op: Connective) -> bool {
        if self.at_tok(&Tok::Conn(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<&'a Spanned, ParseError> {
        match self.peek() {
            Some(s) if s.tok == tok => Ok(self.bump()),
            other => Err(ParseError::Syntax {
                position: other.map(|s| s.pos).unwrap_or(self.end),
                expected: what.to_string(),
                found: describe(other),
            }),
        }
    }
}
