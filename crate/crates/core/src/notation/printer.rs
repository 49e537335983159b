use crate::syntax::{Connective, LexicalItem, Term, TermKind};

use super::lexer::VARIABLE_LETTERS;
use super::{Glyphs, Mode, Notation};

/// Binding strength; higher binds tighter.
fn level(op: Connective) -> u8 {
    match op {
        Connective::Iff => 1,
        Connective::If => 2,
        Connective::Or => 3,
        Connective::And => 4,
        Connective::Neg => 5,
    }
}

const PREFIX: u8 = 5;

fn right_assoc(op: Connective) -> bool {
    matches!(op, Connective::If | Connective::Iff)
}

enum Shape<'a> {
    Binary(Connective, &'a Term, &'a Term),
    Prefix,
    Atom,
}

fn shape(t: &Term) -> Shape<'_> {
    let (head, args) = t.spine();
    match (head.as_leaf(), args.as_slice()) {
        (Some(LexicalItem::Connective(op)), [l, r]) if *op != Connective::Neg => {
            Shape::Binary(*op, l, r)
        }
        (Some(LexicalItem::Connective(Connective::Neg)), [_]) => Shape::Prefix,
        (Some(LexicalItem::Quantifier(_)), [b]) if matches!(b.kind(), TermKind::Lam { .. }) => {
            Shape::Prefix
        }
        _ => Shape::Atom,
    }
}

fn shape_level(t: &Term) -> u8 {
    match shape(t) {
        Shape::Binary(op, ..) => level(op),
        _ => PREFIX,
    }
}

pub(crate) struct Printer {
    notation: Notation,
    /// Names of enclosing binders, innermost last.
    scope: Vec<String>,
}

impl Printer {
    pub fn new(notation: Notation) -> Self {
        Printer {
            notation,
            scope: Vec::new(),
        }
    }

    fn unicode(&self) -> bool {
        self.notation.glyphs == Glyphs::Unicode
    }

    fn conn(&self, op: Connective) -> &'static str {
        if self.unicode() {
            op.unicode()
        } else {
            op.ascii()
        }
    }

    pub fn term(&mut self, t: &Term) -> String {
        match shape(t) {
            Shape::Binary(op, l, r) => match self.notation.mode {
                Mode::Strict => {
                    let (ls, rs) = (self.term(l), self.term(r));
                    format!("({ls} {} {rs})", self.conn(op))
                }
                Mode::Fixity => {
                    let lv = level(op);
                    let left_parens = shape_level(l) < lv
                        || (shape_level(l) == lv && right_assoc(op));
                    let right_parens = shape_level(r) < lv
                        || (shape_level(r) == lv && !right_assoc(op));
                    let ls = self.wrapped(l, left_parens);
                    let rs = self.wrapped(r, right_parens);
                    format!("{ls} {} {rs}", self.conn(op))
                }
            },
            Shape::Prefix => {
                let (head, args) = t.spine();
                match head.as_leaf() {
                    Some(LexicalItem::Quantifier(q)) => {
                        let TermKind::Lam {
                            bound_hint, body, ..
                        } = args[0].kind()
                        else {
                            unreachable!()
                        };
                        let name = self.fresh_name(bound_hint, body);
                        let glyph = if self.unicode() { q.unicode() } else { q.ascii() };
                        self.scope.push(name.clone());
                        let b = self.prefix_operand(body);
                        self.scope.pop();
                        let gap = if b.starts_with(|c: char| c.is_ascii_lowercase()) {
                            " "
                        } else {
                            ""
                        };
                        format!("{glyph}{name}{gap}{b}")
                    }
                    _ => {
                        let b = self.prefix_operand(args[0]);
                        format!("{}{b}", self.conn(Connective::Neg))
                    }
                }
            }
            Shape::Atom => self.atom(t),
        }
    }

    fn prefix_operand(&mut self, t: &Term) -> String {
        match self.notation.mode {
            // Binary nodes already carry their own parentheses.
            Mode::Strict => self.term(t),
            Mode::Fixity => {
                let p = shape_level(t) < PREFIX;
                self.wrapped(t, p)
            }
        }
    }

    fn wrapped(&mut self, t: &Term, parens: bool) -> String {
        let s = self.term(t);
        if parens {
            format!("({s})")
        } else {
            s
        }
    }

    fn atom(&mut self, t: &Term) -> String {
        match t.kind() {
            TermKind::Lam {
                bound_hint,
                bound_ty,
                body,
            } => {
                let name = self.fresh_name(bound_hint, body);
                self.scope.push(name.clone());
                let b = self.term(body);
                self.scope.pop();
                let _ = bound_ty;
                if self.unicode() {
                    format!("λ{name}.{b}")
                } else {
                    format!("\\{name}.{b}")
                }
            }
            _ => {
                let (head, args) = t.spine();
                let h = self.head(head);
                if args.is_empty() {
                    h
                } else {
                    let parts: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                    let h = if matches!(head.kind(), TermKind::Lam { .. }) {
                        format!("({h})")
                    } else {
                        h
                    };
                    format!("{h}({})", parts.join(","))
                }
            }
        }
    }

    fn head(&mut self, head: &Term) -> String {
        match head.kind() {
            TermKind::Leaf(item) => self.item(item),
            TermKind::Bound(k) => {
                let k = *k as usize;
                if k < self.scope.len() {
                    self.scope[self.scope.len() - 1 - k].clone()
                } else {
                    format!("#{k}")
                }
            }
            _ => self.atom(head),
        }
    }

    pub fn item(&self, item: &LexicalItem) -> String {
        let u = self.unicode();
        match item {
            LexicalItem::Connective(c) => self.conn(*c).to_string(),
            LexicalItem::Sentence(s) => s.to_string(),
            LexicalItem::Predicate { name, .. } | LexicalItem::Function { name, .. } => {
                name.to_string()
            }
            LexicalItem::Quantifier(q) => if u { q.unicode() } else { q.ascii() }.to_string(),
            LexicalItem::Variable(n) | LexicalItem::Constant(n) => n.clone(),
            LexicalItem::Phi { index, .. } => {
                if u {
                    format!("φ{index}")
                } else {
                    format!("phi{index}")
                }
            }
            LexicalItem::Tau { index } => {
                if u {
                    format!("τ{index}")
                } else {
                    format!("tau{index}")
                }
            }
            LexicalItem::Meta { id, .. } => format!("?{id}"),
            LexicalItem::Fresh { id, .. } => format!("!{id}"),
        }
    }

    // Keeps the hint unless it would shadow an enclosing name or capture a
    // free variable of the same spelling.
    fn fresh_name(&self, hint: &str, body: &Term) -> String {
        let clashes = |n: &str| {
            self.scope.iter().any(|s| s == n)
                || body.contains_leaf(&LexicalItem::Variable(n.to_string()))
        };
        let hint_ok = is_variable_name(hint);
        if hint_ok && !clashes(hint) {
            return hint.to_string();
        }
        for v in VARIABLE_LETTERS {
            let n = v.to_string();
            if !clashes(&n) {
                return n;
            }
        }
        (1..)
            .map(|i| format!("x_{i}"))
            .find(|n| !clashes(n))
            .unwrap()
    }
}

fn is_variable_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if VARIABLE_LETTERS.contains(&c) => {}
        _ => return false,
    }
    let rest: String = chars.collect();
    rest.is_empty()
        || rest
            .strip_prefix('_')
            .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}
