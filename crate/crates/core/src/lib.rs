//! Termination orderings for first-order and higher-order rewriting: the
//! recursive path ordering, the computability-closure orderings and HORPO,
//! with re-checkable derivations.

pub mod budget;
pub mod check;
pub mod derivation;
pub mod enumerate;
pub mod error;
pub mod extension;
pub mod fo;
pub mod ho;
pub mod polarity;
pub mod precedence;
pub mod report;
pub mod rewrite;
pub mod signature;
pub mod syntax;
pub mod term;
pub mod types;
pub mod validate;

pub use budget::Budget;
pub use derivation::{Derivation, Judgement, Label, OrderKind};
pub use error::*;
pub use precedence::{PrecCmp, Precedence, Status, Statuses, SymbolOrder};
pub use rewrite::{Rule, Trs};
pub use signature::Signature;
pub use term::{Position, Subst, Term, Var};
pub use types::{name, Name, Type};
