//! Simple types: base sorts and right-associative arrows.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-ish identifier shared by sorts, symbols and variables.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base(Name),
    Arrow(Arc<Type>, Arc<Type>),
}

/// Position inside a type: a word over {1, 2} (1 = domain, 2 = codomain).
pub type TypePosition = Vec<u8>;

impl Type {
    pub fn base(sort: &str) -> Type {
        Type::Base(name(sort))
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `args[0] -> args[1] -> ... -> out`
    pub fn arrows(args: impl IntoIterator<Item = Type>, out: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(out, |acc, a| Type::arrow(a, acc))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Base(_))
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(d, c) => Some((d, c)),
            Type::Base(_) => None,
        }
    }

    /// Splits `T1 -> ... -> Tn -> B` into `([T1..Tn], B)`.
    pub fn flatten(&self) -> (Vec<&Type>, &Name) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Type::Arrow(d, c) => {
                    args.push(d.as_ref());
                    cur = c;
                }
                Type::Base(b) => return (args, b),
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.flatten().0.len()
    }

    pub fn output_sort(&self) -> &Name {
        self.flatten().1
    }

    /// Result type after applying `n` arguments, if the type has that many.
    pub fn apply_n(&self, n: usize) -> Option<&Type> {
        let mut cur = self;
        for _ in 0..n {
            cur = cur.as_arrow()?.1;
        }
        Some(cur)
    }

    pub fn sorts(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_sorts(&mut out);
        out
    }

    fn collect_sorts(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Base(b) => {
                out.insert(b.clone());
            }
            Type::Arrow(d, c) => {
                d.collect_sorts(out);
                c.collect_sorts(out);
            }
        }
    }

    pub fn subtype_at(&self, pos: &[u8]) -> Option<&Type> {
        let mut cur = self;
        for &step in pos {
            let (d, c) = cur.as_arrow()?;
            cur = match step {
                1 => d,
                2 => c,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Every position of the type tree, root first.
    pub fn positions(&self) -> Vec<TypePosition> {
        let mut out = vec![Vec::new()];
        if let Type::Arrow(d, c) = self {
            out.extend(d.positions().into_iter().map(|mut p| {
                p.insert(0, 1);
                p
            }));
            out.extend(c.positions().into_iter().map(|mut p| {
                p.insert(0, 2);
                p
            }));
        }
        out
    }

    /// Number of nested arrows on the longest branch.
    pub fn depth(&self) -> usize {
        match self {
            Type::Base(_) => 0,
            Type::Arrow(d, c) => 1 + d.depth().max(c.depth()),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base(b) => write!(f, "{b}"),
            Type::Arrow(d, c) => {
                if d.is_base() {
                    write!(f, "{d} -> {c}")
                } else {
                    write!(f, "({d}) -> {c}")
                }
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
