//! A generic logic engine: one higher-order abstract syntax for several
//! formal languages, Huet-style higher-order unification, and natural
//! deduction proof checking built on top of it.

pub mod lambda;
pub mod notation;
pub mod proof;
pub mod rules;
pub mod semantics;
pub mod syntax;
pub mod unify;

pub use syntax::{Language, LexicalItem, SimpleType, Term};
