//! Simple types, lexicon modules, languages and the typed term tree.

mod lexicon;
mod term;
mod types;

pub use lexicon::{
    Connective, Language, LexicalItem, LexiconModule, Quantifier, SentenceLetter,
};
pub use term::{decompose, mk_app, type_of, DecomposeError, Term, TermKind, TypeError};
pub use types::{Category, SimpleType};

impl Language {
    /// A term is well-formed in a language iff every leaf is admitted.
    pub fn well_formed(&self, t: &Term) -> bool {
        let mut ok = true;
        t.visit_leaves(&mut |i| ok &= self.admits(i));
        ok
    }
}
