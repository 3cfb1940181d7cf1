//! First-order orderings: RPO, the inductive computability ordering RCO,
//! the R-parametric computability closure and its fixpoint oracle.

pub mod closure;
pub mod fixpoint;
pub mod rco;
pub mod rpo;

pub use closure::{cc_fo_member, FoClosureOptions};
pub use fixpoint::{rco_fixpoint_oracle, FixpointOptions, RedVariant};
pub use rco::{rco_gt, rco_gt_with, RcoOptions};
pub use rpo::rpo_gt;

use crate::error::{OrderError, PrecedenceError};
use crate::precedence::SymbolOrder;
use crate::signature::Signature;
use crate::term::Term;

pub(crate) fn check_first_order(sig: &Signature, order: &SymbolOrder, ts: &[&Term]) -> Result<(), OrderError> {
    for t in ts {
        if !t.is_first_order(sig) {
            return Err(OrderError::NotFirstOrder(t.to_string()));
        }
        check_symbols(order, t)?;
    }
    Ok(())
}

pub(crate) fn check_symbols(order: &SymbolOrder, t: &Term) -> Result<(), OrderError> {
    match t.symbols().into_iter().find(|s| !order.prec.contains(s)) {
        Some(s) => Err(PrecedenceError::UndeclaredSymbol(s).into()),
        None => Ok(()),
    }
}
