//! The recursive path ordering on first-order terms.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::derivation::{Derivation, Judgement, Label, OrderKind};
use crate::error::OrderError;
use crate::extension::status_ext;
use crate::precedence::{PrecCmp, SymbolOrder};
use crate::signature::Signature;
use crate::term::Term;

/// A derivation of `t >rpo u`, if one exists.
pub fn rpo_gt(sig: &Signature, order: &SymbolOrder, t: &Term, u: &Term) -> Result<Option<Derivation>, OrderError> {
    super::check_first_order(sig, order, &[t, u])?;
    Ok(Rpo { order, memo: RefCell::default() }.gt(t, u))
}

struct Rpo<'a> {
    order: &'a SymbolOrder,
    memo: RefCell<HashMap<(Term, Term), Option<Derivation>>>,
}

impl Rpo<'_> {
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
        let concl = || Judgement::gt(OrderKind::Rpo, t, u);

        for ti in &ts {
            if *ti == u {
                return Some(Derivation::leaf(Label::Rpo(1), concl()));
            }
        }
        for ti in &ts {
            if let Some(d) = self.gt(ti, u) {
                return Some(Derivation::new(Label::Rpo(1), concl(), vec![d]));
            }
        }

        let (g, us) = u.symbol_spine()?;
        let cmp = self.order.cmp(f, g).ok()?;
        if cmp == PrecCmp::NotGreaterOrEquiv {
            return None;
        }
        let mut children = Vec::new();
        for uj in &us {
            children.push(self.gt(t, uj)?);
        }
        match cmp {
            PrecCmp::Greater => Some(Derivation::new(Label::Rpo(2), concl(), children)),
            _ => {
                let used = RefCell::new(Vec::new());
                let rel = |a: &&Term, b: &&Term| match self.gt(a, b) {
                    Some(d) => {
                        used.borrow_mut().push(d);
                        true
                    }
                    None => false,
                };
                if !status_ext(self.order.status(f), rel, &ts, &us) {
                    return None;
                }
                for d in used.into_inner() {
                    if !children.contains(&d) {
                        children.push(d);
                    }
                }
                Some(Derivation::new(Label::Rpo(3), concl(), children))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precedence::{Precedence, Status, Statuses};
    use crate::types::{name, Type};

    fn b() -> Type {
        Type::base("B")
    }

    fn sig() -> Signature {
        let bbb = Type::arrows([b(), b()], b());
        Signature::new().with("0", b()).with("s", Type::arrow(b(), b())).with("minus", bbb.clone()).with("div", bbb)
    }

    fn order(minus_status: Status) -> SymbolOrder {
        let syms = sig().symbol_names().cloned().collect::<Vec<_>>();
        let prec = Precedence::from_decls(
            syms,
            [(name("div"), name("minus")), (name("div"), name("s")), (name("minus"), name("s"))],
            [],
        )
        .unwrap();
        SymbolOrder::new(prec, Statuses::new().with("minus", minus_status)).unwrap()
    }

    fn x() -> Term {
        Term::var_named("x", b())
    }
    fn y() -> Term {
        Term::var_named("y", b())
    }
    fn s(t: Term) -> Term {
        Term::app(Term::sym("s"), t)
    }
    fn bin(f: &str, a: Term, c: Term) -> Term {
        Term::apps(Term::sym(f), [a, c])
    }

    #[test]
    fn minus_zero_by_subterm() {
        let d = rpo_gt(&sig(), &order(Status::Mul), &bin("minus", x(), Term::sym("0")), &x()).unwrap().unwrap();
        assert_eq!(d.label, Label::Rpo(1));
        assert!(d.children.is_empty());
    }

    #[test]
    fn minus_successors_by_multiset() {
        let t = bin("minus", s(x()), s(y()));
        let u = bin("minus", x(), y());
        let d = rpo_gt(&sig(), &order(Status::Mul), &t, &u).unwrap().unwrap();
        assert_eq!(d.label, Label::Rpo(3));
        assert!(rpo_gt(&sig(), &order(Status::LexLeftRight), &t, &u).unwrap().is_some());
    }

    #[test]
    fn division_rule_not_oriented() {
        let t = bin("div", s(x()), y());
        let u = s(bin("div", bin("minus", x(), y()), y()));
        for st in Status::ALL {
            assert!(rpo_gt(&sig(), &order(st), &t, &u).unwrap().is_none());
        }
    }

    #[test]
    fn irreflexive_and_rejects_higher_order() {
        let t = bin("minus", s(x()), y());
        assert!(rpo_gt(&sig(), &order(Status::Mul), &t, &t).unwrap().is_none());
        let f = Term::var_named("F", Type::arrow(b(), b()));
        assert!(matches!(rpo_gt(&sig(), &order(Status::Mul), &t, &Term::app(f, x())), Err(OrderError::NotFirstOrder(_))));
    }
}
