//! The higher-order recursive path ordering on simply-typed terms.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use crate::derivation::{Derivation, Judgement, Label, OrderKind};
use crate::error::OrderError;
use crate::extension::status_ext;
use crate::precedence::{PrecCmp, Status, SymbolOrder};
use crate::signature::Signature;
use crate::term::{Node, Term};
use crate::types::Type;

/// A derivation of `t >horpo u`, if one exists.
pub fn horpo_gt(sig: &Signature, order: &SymbolOrder, t: &Term, u: &Term) -> Result<Option<Derivation>, OrderError> {
    Horpo::new(sig, order).gt(t, u)
}

/// Memoised HORPO comparisons under one signature and symbol order.
pub struct Horpo<'a> {
    sig: &'a Signature,
    order: &'a SymbolOrder,
    memo: RefCell<HashMap<(Term, Term), Option<Derivation>>>,
    trips: Cell<usize>,
}

impl<'a> Horpo<'a> {
    pub fn new(sig: &'a Signature, order: &'a SymbolOrder) -> Self {
        Horpo { sig, order, memo: RefCell::default(), trips: Cell::new(0) }
    }

    pub fn gt(&self, t: &Term, u: &Term) -> Result<Option<Derivation>, OrderError> {
        t.type_of(self.sig)?;
        u.type_of(self.sig)?;
        super::check_symbols(self.order, t)?;
        super::check_symbols(self.order, u)?;
        Ok(self.cmp(t, u))
    }

    /// How many application comparisons met argument types under which a
    /// multiset comparison other than the componentwise one could
    /// type-check. Stays zero for simply-typed input.
    pub fn case6_trips(&self) -> usize {
        self.trips.get()
    }

    fn ty(&self, t: &Term) -> Option<Type> {
        t.type_of(self.sig).ok()
    }

    fn cmp(&self, t: &Term, u: &Term) -> Option<Derivation> {
        let key = (t.clone(), u.clone());
        if let Some(d) = self.memo.borrow().get(&key) {
            return d.clone();
        }
        let d = if self.ty(t)? == self.ty(u)? { self.compute(t, u) } else { None };
        self.memo.borrow_mut().insert(key, d.clone());
        d
    }

    /// `t ≥ u`: `None` when not comparable, `Some(None)` for equality.
    fn ge(&self, t: &Term, u: &Term) -> Option<Option<Derivation>> {
        if t == u {
            Some(None)
        } else {
            self.cmp(t, u).map(Some)
        }
    }

    /// `P(f, t⃗, v)`: `f t⃗ > v` or some `t_j ≥ v`.
    fn p(&self, t: &Term, ts: &[&Term], v: &Term) -> Option<Option<Derivation>> {
        if ts.contains(&v) {
            return Some(None);
        }
        if let Some(d) = self.cmp(t, v) {
            return Some(Some(d));
        }
        ts.iter().find_map(|tj| self.cmp(tj, v)).map(Some)
    }

    fn compute(&self, t: &Term, u: &Term) -> Option<Derivation> {
        let concl = || Judgement::gt(OrderKind::Horpo, t, u);
        if let Some((f, ts)) = t.symbol_spine() {
            // (1)
            for ti in &ts {
                if let Some(d) = self.ge(ti, u) {
                    return Some(Derivation::new(Label::Horpo(1), concl(), d.into_iter().collect()));
                }
            }
            if let Some((g, us)) = u.symbol_spine() {
                if let Some(d) = self.symbol_cases(t, f, &ts, g, &us) {
                    return Some(d);
                }
            }
            // (5)
            let (h, args) = u.spine();
            for k in 0..args.len() {
                let head = Term::apps(h.clone(), args[..k].iter().map(|a| (*a).clone()));
                let mut parts = vec![head];
                parts.extend(args[k..].iter().map(|a| (*a).clone()));
                let mut children = Vec::new();
                let all = parts.iter().all(|v| match self.p(t, &ts, v) {
                    Some(d) => {
                        children.extend(d);
                        true
                    }
                    None => false,
                });
                if all {
                    return Some(Derivation::new(Label::Horpo(5), concl(), children));
                }
            }
        }
        match (t.node(), u.node()) {
            (Node::App(t1, t2), Node::App(u1, u2)) => self.application(t, u, t1, t2, u1, u2),
            (Node::Lam(bt, _), Node::Lam(bu, _)) if bt.ty == bu.ty => {
                let (_, tb, ub) = t.open_pair(u)?;
                let d = self.cmp(&tb, &ub)?;
                Some(Derivation::new(Label::Horpo(7), concl(), vec![d]))
            }
            _ => None,
        }
    }

    fn symbol_cases(&self, t: &Term, f: &str, ts: &[&Term], g: &str, us: &[&Term]) -> Option<Derivation> {
        let concl = || Judgement::gt(OrderKind::Horpo, t, &Term::apps(Term::sym(g), us.iter().map(|u| (*u).clone())));
        let cmp = self.order.cmp(f, g).ok()?;
        let p_all = || {
            let mut children = Vec::new();
            for uj in us {
                children.extend(self.p(t, ts, uj)?);
            }
            Some(children)
        };
        match cmp {
            PrecCmp::Greater => p_all().map(|ch| Derivation::new(Label::Horpo(2), concl(), ch)),
            PrecCmp::Equivalent => {
                let status = self.order.status(f);
                let used = RefCell::new(Vec::new());
                let rel = |a: &&Term, b: &&Term| match self.cmp(a, b) {
                    Some(d) => {
                        used.borrow_mut().push(d);
                        true
                    }
                    None => false,
                };
                if !status_ext(status, rel, ts, us) {
                    return None;
                }
                let mut children = used.into_inner();
                let label = if status == Status::Mul {
                    Label::Horpo(3)
                } else {
                    for d in p_all()? {
                        if !children.contains(&d) {
                            children.push(d);
                        }
                    }
                    Label::Horpo(4)
                };
                Some(Derivation::new(label, concl(), children))
            }
            _ => None,
        }
    }

    fn application(&self, t: &Term, u: &Term, t1: &Term, t2: &Term, u1: &Term, u2: &Term) -> Option<Derivation> {
        let (ty1, ty2, vy1, vy2) = (self.ty(t1)?, self.ty(t2)?, self.ty(u1)?, self.ty(u2)?);
        let a = ty1 == vy1 && ty1 == vy2;
        let b = ty2 == vy1 && ty2 == vy2;
        let d = ty2 == vy1 && ty1 == vy2;
        if a || b || d {
            self.trips.set(self.trips.get() + 1);
        }
        let g1 = self.ge(t1, u1)?;
        let g2 = self.ge(t2, u2)?;
        if g1.is_none() && g2.is_none() {
            return None;
        }
        let children = g1.into_iter().chain(g2).collect();
        Some(Derivation::new(Label::Horpo(6), Judgement::gt(OrderKind::Horpo, t, u), children))
    }
}
