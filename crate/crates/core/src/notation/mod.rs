//! Concrete ASCII/Unicode notation for formulas: a parser accepting both
//! glyph sets, and printers for strict (fully parenthesized) and
//! conventional-fixity output.
//!
//! Precedence, tightest first: `~` and quantifier prefixes, `/\`, `\/`,
//! `->`, `<->`. Conjunction and disjunction associate to the left,
//! the conditional and biconditional to the right.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::syntax::{LexicalItem, Term};

pub(crate) use lexer::{tokenize, Tok};
pub(crate) use parser::Cursor;
pub use parser::{FormulaParser, MAX_ARITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Strict,
    #[default]
    Fixity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Glyphs {
    #[default]
    Ascii,
    Unicode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Notation {
    pub mode: Mode,
    pub glyphs: Glyphs,
}

impl Notation {
    pub const ASCII: Notation = Notation {
        mode: Mode::Fixity,
        glyphs: Glyphs::Ascii,
    };
    pub const UNICODE: Notation = Notation {
        mode: Mode::Fixity,
        glyphs: Glyphs::Unicode,
    };
    pub const ASCII_STRICT: Notation = Notation {
        mode: Mode::Strict,
        glyphs: Glyphs::Ascii,
    };
    pub const UNICODE_STRICT: Notation = Notation {
        mode: Mode::Strict,
        glyphs: Glyphs::Unicode,
    };

    pub fn new(mode: Mode, glyphs: Glyphs) -> Self {
        Notation { mode, glyphs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at position {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("at position {position}: unknown symbol `{symbol}`")]
    UnknownSymbol { position: usize, symbol: String },
    #[error("at position {position}: {symbol} used with {found} arguments, expected {expected}")]
    ArityMismatch {
        position: usize,
        symbol: String,
        expected: usize,
        found: usize,
    },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownSymbol { position, .. }
            | ParseError::ArityMismatch { position, .. } => *position,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "ParseError",
            ParseError::UnknownSymbol { .. } => "UnknownSymbol",
            ParseError::ArityMismatch { .. } => "ArityMismatch",
        }
    }

    /// Moves the reported position by `by` characters.
    pub fn offset(self, by: usize) -> Self {
        match self {
            ParseError::Syntax {
                position,
                expected,
                found,
            } => ParseError::Syntax {
                position: position + by,
                expected,
                found,
            },
            ParseError::UnknownSymbol { position, symbol } => ParseError::UnknownSymbol {
                position: position + by,
                symbol,
            },
            ParseError::ArityMismatch {
                position,
                symbol,
                expected,
                found,
            } => ParseError::ArityMismatch {
                position: position + by,
                symbol,
                expected,
                found,
            },
        }
    }
}

/// Parses a formula of `lang`. Both glyph sets are always accepted; the
/// notation's mode selects strict or fixity parsing.
pub fn parse(lang: &crate::syntax::Language, notation: Notation, text: &str) -> Result<Term, ParseError> {
    FormulaParser::new(lang, notation).parse(text)
}

pub fn parse_term(lang: &crate::syntax::Language, text: &str) -> Result<Term, ParseError> {
    FormulaParser::new(lang, Notation::ASCII).parse_term(text)
}

/// Canonical rendering of a formula or term.
pub fn print(t: &Term, notation: Notation) -> String {
    printer::Printer::new(notation).term(t)
}

pub fn print_item(item: &LexicalItem, notation: Notation) -> String {
    printer::Printer::new(notation).item(item)
}

pub(crate) fn print_debug(t: &Term) -> String {
    print(t, Notation::UNICODE)
}
