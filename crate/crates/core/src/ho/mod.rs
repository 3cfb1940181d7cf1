//! Higher-order orderings: HORPO, the computability closure with its
//! argument ordering, and the closure-based ordering HORCO.

pub mod closure;
pub mod horco;
pub mod horpo;
pub mod view;

pub use closure::{cc_ho_member, size_approx_gt, ClosureSearch};
pub use horco::{horco_chain_gt, horco_gt, orient_rule, whorco_gt, Horco};
pub use horpo::{horpo_gt, Horpo};
pub use view::{RuleView, TrsView};

pub(crate) use crate::fo::check_symbols;
