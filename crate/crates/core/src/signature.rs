use std::collections::{BTreeMap, BTreeSet};

use crate::error::SignatureError;
use crate::precedence::Status;
use crate::types::{Name, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub ty: Type,
    /// `None` when the input did not pin a status.
    pub status: Option<Status>,
}

/// Declared sorts and typed function symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeSet<Name>,
    symbols: BTreeMap<Name, SymbolDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, sort: Name) {
        self.sorts.insert(sort);
    }

    pub fn add_symbol(&mut self, sym: Name, ty: Type, status: Option<Status>) -> Result<(), SignatureError> {
        for s in ty.sorts() {
            if !self.sorts.contains(&s) {
                return Err(SignatureError::UnknownSort(s));
            }
        }
        if self.symbols.contains_key(&sym) {
            return Err(SignatureError::DuplicateSymbol(sym));
        }
        self.symbols.insert(sym, SymbolDecl { ty, status });
        Ok(())
    }

    /// Builder used by tests and generators: declares every sort it meets.
    pub fn with(mut self, sym: &str, ty: Type) -> Self {
        for s in ty.sorts() {
            self.sorts.insert(s);
        }
        self.symbols.insert(sym.into(), SymbolDecl { ty, status: None });
        self
    }

    pub fn with_status(mut self, sym: &str, status: Status) -> Self {
        if let Some(d) = self.symbols.get_mut(sym) {
            d.status = Some(status);
        }
        self
    }

    pub fn sorts(&self) -> &BTreeSet<Name> {
        &self.sorts
    }

    pub fn has_sort(&self, sort: &str) -> bool {
        self.sorts.contains(sort)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Name, &SymbolDecl)> {
        self.symbols.iter()
    }

    pub fn symbol_names(&self) -> impl Iterator<Item = &Name> {
        self.symbols.keys()
    }

    pub fn decl(&self, sym: &str) -> Option<&SymbolDecl> {
        self.symbols.get(sym)
    }

    pub fn type_of(&self, sym: &str) -> Option<&Type> {
        self.symbols.get(sym).map(|d| &d.ty)
    }

    pub fn contains(&self, sym: &str) -> bool {
        self.symbols.contains_key(sym)
    }

    pub fn arity(&self, sym: &str) -> Option<usize> {
        self.type_of(sym).map(Type::arity)
    }

    pub fn lookup(&self, sym: &str) -> Result<&SymbolDecl, SignatureError> {
        self.symbols.get(sym).ok_or_else(|| SignatureError::UndeclaredSymbol(sym.into()))
    }

    /// Every symbol type has only base-sorted arguments.
    pub fn is_first_order(&self) -> bool {
        self.symbols.values().all(|d| d.ty.flatten().0.iter().all(|t| t.is_base()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::name;

    #[test]
    fn rejects_unknown_sorts_and_duplicates() {
        let mut sig = Signature::new();
        sig.add_sort(name("B"));
        assert!(sig.add_symbol(name("z"), Type::base("B"), None).is_ok());
        assert_eq!(sig.add_symbol(name("z"), Type::base("B"), None), Err(SignatureError::DuplicateSymbol(name("z"))));
        assert_eq!(sig.add_symbol(name("f"), Type::base("C"), None), Err(SignatureError::UnknownSort(name("C"))));
        assert!(sig.lookup("g").is_err());
    }

    #[test]
    fn first_order_detection() {
        let b = Type::base("B");
        let fo = Signature::new().with("s", Type::arrow(b.clone(), b.clone()));
        assert!(fo.is_first_order());
        let ho = fo.with("h", Type::arrow(Type::arrow(b.clone(), b.clone()), b));
        assert!(!ho.is_first_order());
    }
}
