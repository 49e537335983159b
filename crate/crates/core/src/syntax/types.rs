use std::fmt;
use std::sync::Arc;

/// Base syntactic categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Form,
    Trm,
}

/// The syntactic type of a lexical item or term: a base category or an
/// arrow between types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base(Category),
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    pub fn form() -> Self {
        SimpleType::Base(Category::Form)
    }

    pub fn trm() -> Self {
        SimpleType::Base(Category::Trm)
    }

    pub fn arrow(from: SimpleType, to: SimpleType) -> Self {
        SimpleType::Arrow(Arc::new(from), Arc::new(to))
    }

    /// Builds `a1 -> a2 -> ... -> target`.
    pub fn curried<I>(args: I, target: SimpleType) -> Self
    where
        I: IntoIterator<Item = SimpleType>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(target, |acc, a| SimpleType::arrow(a, acc))
    }

    /// `Trm -> ... -> Trm -> target` with `arity` arguments.
    pub fn predicate_like(arity: usize, target: Category) -> Self {
        Self::curried(
            std::iter::repeat_n(SimpleType::trm(), arity),
            SimpleType::Base(target),
        )
    }

    pub fn is_base(&self) -> bool {
        matches!(self, SimpleType::Base(_))
    }

    /// Argument types and target category of a curried type.
    pub fn unfold(&self) -> (Vec<&SimpleType>, Category) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                SimpleType::Base(c) => return (args, *c),
                SimpleType::Arrow(a, b) => {
                    args.push(a.as_ref());
                    cur = b.as_ref();
                }
            }
        }
    }

    pub fn target(&self) -> Category {
        self.unfold().1
    }

    pub fn arity(&self) -> usize {
        self.unfold().0.len()
    }

    /// Splits an arrow into domain and codomain.
    pub fn split_arrow(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Arrow(a, b) => Some((a, b)),
            SimpleType::Base(_) => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Form => f.write_str("Form"),
            Category::Trm => f.write_str("Trm"),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(c) => write!(f, "{c}"),
            SimpleType::Arrow(a, b) => {
                if a.is_base() {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
        }
    }
}
