use thiserror::Error;

use crate::types::{Name, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("unknown sort `{0}`")]
    UnknownSort(Name),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(Name),
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(Name),
    #[error("cannot apply `{fun}` of non-arrow type {ty}")]
    NotAFunction { fun: String, ty: Type },
    #[error("argument `{arg}` has type {found}, expected {expected}")]
    Mismatch { arg: String, expected: Type, found: Type },
    #[error("dangling bound variable index {0}")]
    DanglingBound(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid position {0:?}")]
    InvalidPosition(Vec<usize>),
    #[error("replacement changes the type from {from} to {to}")]
    TypeChange { from: Type, to: Type },
    #[error("substitution binds `{var}` of type {expected} to a term of type {found}")]
    IllTypedBinding { var: Name, expected: Type, found: Type },
    #[error(transparent)]
    Type(#[from] TypeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrecedenceError {
    #[error("undeclared symbol `{0}` in precedence")]
    UndeclaredSymbol(Name),
    #[error("precedence cycle: {}", .0.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(" > "))]
    Cycle(Vec<Name>),
    #[error("equivalent symbols {} have different statuses", .0.iter().map(|s| format!("`{s}`")).collect::<Vec<_>>().join(", "))]
    StatusMismatch(Vec<Name>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("`{0}` is not a first-order term over the signature")]
    NotFirstOrder(String),
    #[error("`{0}` is not headed by a function symbol")]
    NotSymbolHeaded(String),
    #[error("`{sym}` expects {expected} arguments, got {found}")]
    Arity { sym: Name, expected: usize, found: usize },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Precedence(#[from] PrecedenceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("left-hand side `{0}` is not headed by a function symbol")]
    LhsNotSymbolHeaded(String),
    #[error("right-hand side variable `{0}` does not occur in the left-hand side")]
    FreeVariable(Name),
    #[error("left-hand side has type {lhs}, right-hand side has type {rhs}")]
    TypeMismatch { lhs: Type, rhs: Type },
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Positioned input diagnostic (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("criterion `{0}` needs a first-order system")]
    NotFirstOrder(&'static str),
    #[error("precedence search is capped at {cap} defined symbols, system has {found}")]
    SearchCap { cap: usize, found: usize },
    #[error("budgets must be positive")]
    Budget,
    #[error(transparent)]
    Order(#[from] OrderError),
}
