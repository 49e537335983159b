//! Lexical items grouped into composable lexicon modules, and languages
//! built as sums of those modules.

use std::collections::BTreeSet;
use std::fmt;

use super::types::{Category, SimpleType};

/// The lexicon module a lexical item belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LexiconModule {
    BooleanConnectives,
    SentenceLetters,
    Predicates,
    Quantifiers,
    TermVariables,
    FunctionSymbols,
    Constants,
    SchematicFormulas,
    SchematicTerms,
}

impl LexiconModule {
    pub fn is_schematic(self) -> bool {
        matches!(
            self,
            LexiconModule::SchematicFormulas | LexiconModule::SchematicTerms
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    And,
    Or,
    If,
    Iff,
    Neg,
}

impl Connective {
    pub fn arity(self) -> usize {
        match self {
            Connective::Neg => 1,
            _ => 2,
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::If => "->",
            Connective::Iff => "<->",
            Connective::Neg => "~",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Connective::And => "∧",
            Connective::Or => "∨",
            Connective::If => "→",
            Connective::Iff => "↔",
            Connective::Neg => "¬",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    All,
    Some,
}

impl Quantifier {
    pub fn ascii(self) -> &'static str {
        match self {
            Quantifier::All => "A",
            Quantifier::Some => "E",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            Quantifier::All => "∀",
            Quantifier::Some => "∃",
        }
    }
}

/// A sentence letter: one of the named letters `P`, `Q`, `R`, `S`, or an
/// indexed letter `P_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SentenceLetter {
    Named(char),
    Indexed(u32),
}

impl fmt::Display for SentenceLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SentenceLetter::Named(c) => write!(f, "{c}"),
            SentenceLetter::Indexed(n) => write!(f, "P_{n}"),
        }
    }
}

/// A lexical item. Its module and its syntactic type are fixed by its
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LexicalItem {
    Connective(Connective),
    Sentence(SentenceLetter),
    Predicate { name: char, arity: u8 },
    Quantifier(Quantifier),
    /// Free object-language term variable.
    Variable(String),
    Function { name: char, arity: u8 },
    Constant(String),
    /// Schematic formula variable `φn` of the declared type (`Trm^k -> Form`).
    Phi { index: u32, ty: SimpleType },
    /// Schematic term variable `τn`.
    Tau { index: u32 },
    /// Flexible variable introduced by the unifier.
    Meta { id: u32, ty: SimpleType },
    /// Fresh rigid constant used when a witness for an unconstrained
    /// flexible is requested.
    Fresh { id: u32, ty: SimpleType },
}

impl LexicalItem {
    pub fn and() -> Self {
        LexicalItem::Connective(Connective::And)
    }
    pub fn or() -> Self {
        LexicalItem::Connective(Connective::Or)
    }
    pub fn if_() -> Self {
        LexicalItem::Connective(Connective::If)
    }
    pub fn iff() -> Self {
        LexicalItem::Connective(Connective::Iff)
    }
    pub fn neg() -> Self {
        LexicalItem::Connective(Connective::Neg)
    }
    pub fn all() -> Self {
        LexicalItem::Quantifier(Quantifier::All)
    }
    pub fn some() -> Self {
        LexicalItem::Quantifier(Quantifier::Some)
    }
    pub fn letter(c: char) -> Self {
        LexicalItem::Sentence(SentenceLetter::Named(c))
    }
    pub fn sentence(n: u32) -> Self {
        LexicalItem::Sentence(SentenceLetter::Indexed(n))
    }
    pub fn predicate(name: char, arity: u8) -> Self {
        LexicalItem::Predicate { name, arity }
    }
    pub fn function(name: char, arity: u8) -> Self {
        LexicalItem::Function { name, arity }
    }
    pub fn constant(name: &str) -> Self {
        LexicalItem::Constant(name.to_string())
    }
    pub fn variable(name: &str) -> Self {
        LexicalItem::Variable(name.to_string())
    }
    /// Schematic formula variable taking `arity` term arguments.
    pub fn phi(index: u32, arity: usize) -> Self {
        LexicalItem::Phi {
            index,
            ty: SimpleType::predicate_like(arity, Category::Form),
        }
    }
    pub fn tau(index: u32) -> Self {
        LexicalItem::Tau { index }
    }

    pub fn module(&self) -> LexiconModule {
        match self {
            LexicalItem::Connective(_) => LexiconModule::BooleanConnectives,
            LexicalItem::Sentence(_) => LexiconModule::SentenceLetters,
            LexicalItem::Predicate { .. } => LexiconModule::Predicates,
            LexicalItem::Quantifier(_) => LexiconModule::Quantifiers,
            LexicalItem::Variable(_) => LexiconModule::TermVariables,
            LexicalItem::Function { .. } => LexiconModule::FunctionSymbols,
            LexicalItem::Constant(_) | LexicalItem::Fresh { .. } => LexiconModule::Constants,
            LexicalItem::Phi { .. } => LexiconModule::SchematicFormulas,
            LexicalItem::Tau { .. } => LexiconModule::SchematicTerms,
            LexicalItem::Meta { ty, .. } => match ty.target() {
                Category::Form => LexiconModule::SchematicFormulas,
                Category::Trm => LexiconModule::SchematicTerms,
            },
        }
    }

    pub fn ty(&self) -> SimpleType {
        match self {
            LexicalItem::Connective(c) => SimpleType::curried(
                std::iter::repeat_n(SimpleType::form(), c.arity()),
                SimpleType::form(),
            ),
            LexicalItem::Sentence(_) => SimpleType::form(),
            LexicalItem::Predicate { arity, .. } => {
                SimpleType::predicate_like(*arity as usize, Category::Form)
            }
            LexicalItem::Quantifier(_) => SimpleType::arrow(
                SimpleType::arrow(SimpleType::trm(), SimpleType::form()),
                SimpleType::form(),
            ),
            LexicalItem::Variable(_) | LexicalItem::Constant(_) | LexicalItem::Tau { .. } => {
                SimpleType::trm()
            }
            LexicalItem::Function { arity, .. } => {
                SimpleType::predicate_like(*arity as usize, Category::Trm)
            }
            LexicalItem::Phi { ty, .. }
            | LexicalItem::Meta { ty, .. }
            | LexicalItem::Fresh { ty, .. } => ty.clone(),
        }
    }

    /// Schematic items are the only ones a substitution may bind.
    pub fn is_schematic(&self) -> bool {
        self.module().is_schematic()
    }

    /// Constants, free variables and fresh witnesses: the items eligible as
    /// eigenvariables.
    pub fn is_individual(&self) -> bool {
        matches!(
            self,
            LexicalItem::Constant(_) | LexicalItem::Variable(_) | LexicalItem::Fresh { .. }
        )
    }
}

/// A language: the set of lexicon modules it admits, plus the schematic
/// modules admitted when writing rule schemas over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    id: String,
    lexicon: BTreeSet<LexiconModule>,
    schematic_extension: BTreeSet<LexiconModule>,
    schematic: bool,
}

impl Language {
    pub fn new(
        id: &str,
        lexicon: impl IntoIterator<Item = LexiconModule>,
        schematic_extension: impl IntoIterator<Item = LexiconModule>,
    ) -> Self {
        Language {
            id: id.to_string(),
            lexicon: lexicon.into_iter().collect(),
            schematic_extension: schematic_extension.into_iter().collect(),
            schematic: false,
        }
    }

    /// Sentence letters and the Boolean connectives.
    pub fn prop() -> Self {
        use LexiconModule::*;
        Language::new(
            "prop",
            [BooleanConnectives, SentenceLetters],
            [SchematicFormulas],
        )
    }

    /// The propositional lexicon extended with predicates, quantifiers,
    /// term variables, function symbols and constants.
    pub fn fol() -> Self {
        use LexiconModule::*;
        let mut lang = Language::prop();
        lang.id = "fol".into();
        lang.lexicon
            .extend([Predicates, Quantifiers, TermVariables, FunctionSymbols, Constants]);
        lang.schematic_extension.insert(SchematicTerms);
        lang
    }

    pub fn by_id(id: &str) -> Option<Self> {
        match id {
            "prop" => Some(Language::prop()),
            "fol" => Some(Language::fol()),
            _ => None,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn lexicon(&self) -> &BTreeSet<LexiconModule> {
        &self.lexicon
    }

    pub fn schematic_extension(&self) -> &BTreeSet<LexiconModule> {
        &self.schematic_extension
    }

    /// The same language with its schematic modules admitted.
    pub fn schematic(&self) -> Self {
        let mut lang = self.clone();
        lang.schematic = true;
        lang
    }

    pub fn is_schematic(&self) -> bool {
        self.schematic
    }

    pub fn admits_module(&self, m: LexiconModule) -> bool {
        self.lexicon.contains(&m) || (self.schematic && self.schematic_extension.contains(&m))
    }

    pub fn admits(&self, item: &LexicalItem) -> bool {
        match item {
            // Unifier-internal items are admitted wherever schematic ones are.
            LexicalItem::Meta { .. } | LexicalItem::Fresh { .. } => self.schematic,
            _ => self.admits_module(item.module()),
        }
    }

    /// True when every module of `self` is also admitted by `other`.
    pub fn is_sublanguage_of(&self, other: &Language) -> bool {
        self.lexicon.is_subset(&other.lexicon)
    }
}
