//! The first-order recursive computability ordering, decided by a
//! syntax-directed search over rules (arg), (prec), (call) and (red).

use std::cell::RefCell;
use std::collections::HashMap;

use crate::derivation::{Derivation, Judgement, Label, OrderKind};
use crate::error::OrderError;
use crate::extension::status_ext;
use crate::precedence::{PrecCmp, SymbolOrder};
use crate::signature::Signature;
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RcoOptions {
    /// Also try the derived rule: `f t > w` and `u` an argument of `w`,
    /// with `w` a symbol-headed subterm of the left-hand side.
    pub decomp: bool,
}

impl Default for RcoOptions {
    fn default() -> Self {
        RcoOptions { decomp: true }
    }
}

/// A derivation of `t >rco u`. Intermediate terms for (red) are the
/// arguments of `t`, searched recursively.
pub fn rco_gt(sig: &Signature, order: &SymbolOrder, t: &Term, u: &Term) -> Result<Option<Derivation>, OrderError> {
    rco_gt_with(sig, order, t, u, RcoOptions::default())
}

pub fn rco_gt_with(
    sig: &Signature,
    order: &SymbolOrder,
    t: &Term,
    u: &Term,
    opts: RcoOptions,
) -> Result<Option<Derivation>, OrderError> {
    if t.head_symbol().is_none() {
        return Err(OrderError::NotSymbolHeaded(t.to_string()));
    }
    super::check_first_order(sig, order, &[t, u])?;
    Ok(Rco { order, opts, memo: RefCell::default() }.gt(t, u))
}

struct Rco<'a> {
    order: &'a SymbolOrder,
    opts: RcoOptions,
    memo: RefCell<HashMap<(Term, Term), Option<Derivation>>>,
}

impl Rco<'_> {
    fn gt(&self, t: &Term, u: &Term) -> Option<Derivation> {
        let key = (t.clone(), u.clone());
        if let Some(d) = self.memo.borrow().get(&key) {
            return d.clone();
        }
        let d = self.compute(t, u);
        self.memo.borrow_mut().insert(key, d.clone());
        d
    }

    fn compute(&self, t: &Term, u: &Term) -> Option<Derivation> {
        let (f, ts) = t.symbol_spine()?;
        let concl = |v: &Term| Judgement::gt(OrderKind::Rco, t, v);

        if ts.contains(&u) {
            return Some(Derivation::leaf(Label::Arg, concl(u)));
        }

        if let Some((g, us)) = u.symbol_spine() {
            if let Some(d) = self.prec_or_call(t, f, &ts, u, g, &us) {
                return Some(d);
            }
        }

        for ti in &ts {
            if ti.head_symbol().is_none() {
                continue;
            }
            if let Some(d) = self.gt(ti, u) {
                let arg = Derivation::leaf(Label::Arg, concl(ti));
                return Some(Derivation::new(Label::Red, concl(u), vec![arg, d]));
            }
        }

        if self.opts.decomp {
            for (_, w) in t.positions().into_iter().skip(1) {
                let Some((_, ws)) = w.symbol_spine() else { continue };
                if !ws.contains(&u) {
                    continue;
                }
                if let Some(d) = self.gt(t, &w) {
                    return Some(Derivation::new(Label::Decomp, concl(u), vec![d]));
                }
            }
        }
        None
    }

    fn prec_or_call(&self, t: &Term, f: &str, ts: &[&Term], u: &Term, g: &str, us: &[&Term]) -> Option<Derivation> {
        let cmp = self.order.cmp(f, g).ok()?;
        if cmp == PrecCmp::NotGreaterOrEquiv {
            return None;
        }
        let mut children = Vec::new();
        for uj in us {
            children.push(self.gt(t, uj)?);
        }
        let concl = Judgement::gt(OrderKind::Rco, t, u);
        if cmp == PrecCmp::Greater {
            return Some(Derivation::new(Label::Prec, concl, children));
        }
        let used = RefCell::new(Vec::new());
        let rel = |a: &&Term, b: &&Term| {
            if a.head_symbol().is_none() {
                return false;
            }
            match self.gt(a, b) {
                Some(d) => {
                    used.borrow_mut().push(d);
                    true
                }
                None => false,
            }
        };
        if !status_ext(self.order.status(f), rel, ts, us) {
            return None;
        }
        for d in used.into_inner() {
            if !children.contains(&d) {
                children.push(d);
            }
        }
        Some(Derivation::new(Label::Call, concl, children))
    }
}
