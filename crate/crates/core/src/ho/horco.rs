//! The higher-order recursive computability ordering: rule orientation by
//! closure membership, the ordering `>whorco` as a bounded least fixpoint,
//! and its closure by context `>horco`.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::budget::Budget;
use crate::derivation::{Derivation, Judgement, Label, OrderKind};
use crate::error::OrderError;
use crate::precedence::SymbolOrder;
use crate::rewrite::{reduction_paths, ReductionBudget, Rule, StepKind};
use crate::signature::Signature;
use crate::term::{Node, Term};

use super::closure::ClosureSearch;
use super::view::{steps, RuleView, TrsView};

/// Fixpoint rounds actually run are `min(max_search_depth, MAX_ROUNDS)`.
pub const MAX_ROUNDS: usize = 3;
const MIX_LIMIT: usize = 64;

/// A derivation of `rhs ∈ CC[f](t⃗)` for `lhs = f t⃗`, with the rules of
/// `rules` as the reduction relation, provided `FV(rhs) ⊆ FV(lhs)` and both
/// sides have the same type.
pub fn orient_rule(
    sig: &Signature,
    order: &SymbolOrder,
    rules: &[Rule],
    rule: &Rule,
    budget: Budget,
) -> Result<Option<Derivation>, OrderError> {
    let (l, r) = (rule.lhs(), rule.rhs());
    let Some((f, ts)) = l.symbol_spine() else {
        return Err(OrderError::NotSymbolHeaded(l.to_string()));
    };
    if !r.free_vars().is_subset(&l.free_vars()) || l.type_of(sig)? != r.type_of(sig)? {
        return Ok(None);
    }
    let view = TrsView::new(sig, rules, budget.max_red_steps);
    let args: Vec<Term> = ts.into_iter().cloned().collect();
    ClosureSearch::new(sig, order, &view, f, &args, budget)?.member(r)
}

pub fn whorco_gt(
    sig: &Signature,
    order: &SymbolOrder,
    t: &Term,
    u: &Term,
    budget: Budget,
) -> Result<Option<Derivation>, OrderError> {
    Horco::new(sig, order, budget).whorco(t, u)
}

pub fn horco_gt(
    sig: &Signature,
    order: &SymbolOrder,
    t: &Term,
    u: &Term,
    budget: Budget,
) -> Result<Option<Derivation>, OrderError> {
    Horco::new(sig, order, budget).horco(t, u)
}

/// A chain `t >horco v1 >horco ... >horco u` of at most `max_chain` steps.
pub fn horco_chain_gt(
    sig: &Signature,
    order: &SymbolOrder,
    t: &Term,
    u: &Term,
    max_chain: usize,
    budget: Budget,
) -> Result<Option<Vec<Derivation>>, OrderError> {
    Horco::new(sig, order, budget).chain(t, u, max_chain)
}

#[derive(Clone)]
enum LevelMemo {
    Found(usize, Derivation),
    Failed(usize),
}

/// Round, source, target and step limit of a reachability query.
type ReachKey = (usize, Term, Term, usize);

/// Shared state for `>whorco` and `>horco` queries under one symbol order.
pub struct Horco<'a> {
    sig: &'a Signature,
    order: &'a SymbolOrder,
    budget: Budget,
    rounds: usize,
    whorco: RefCell<HashMap<(Term, Term), LevelMemo>>,
    reach: RefCell<HashMap<ReachKey, Option<Derivation>>>,
    chains: RefCell<HashMap<(Term, Term), usize>>,
}

/// `>horco` of round `level` seen as a rewrite relation, together with β.
struct LevelView<'h, 'a> {
    horco: &'h Horco<'a>,
    level: usize,
}

impl RuleView for LevelView<'_, '_> {
    fn forward(&self, t: &Term, max_size: usize) -> Vec<(Term, Derivation)> {
        let rb = ReductionBudget { max_steps: self.horco.budget.max_red_steps, max_term_size: max_size };
        reduction_paths(self.horco.sig, &[], t, rb, StepKind::Beta).into_iter().map(|(r, p)| (r, steps(p, Vec::new()))).collect()
    }

    fn reaches(&self, t: &Term, u: &Term, max_size: usize) -> Option<Derivation> {
        self.horco.reach_at(self.level, t, u, self.horco.budget.max_red_steps, max_size.max(u.size()))
    }
}

impl<'a> Horco<'a> {
    pub fn new(sig: &'a Signature, order: &'a SymbolOrder, budget: Budget) -> Self {
        Horco {
            sig,
            order,
            budget,
            rounds: budget.max_search_depth.min(MAX_ROUNDS),
            whorco: RefCell::default(),
            reach: RefCell::default(),
            chains: RefCell::default(),
        }
    }

    fn check(&self, t: &Term, u: &Term) -> Result<(), OrderError> {
        t.type_of(self.sig)?;
        u.type_of(self.sig)?;
        super::check_symbols(self.order, t)?;
        super::check_symbols(self.order, u)?;
        Ok(())
    }

    pub fn whorco(&self, t: &Term, u: &Term) -> Result<Option<Derivation>, OrderError> {
        self.check(t, u)?;
        Ok((1..=self.rounds).find_map(|k| self.whorco_at(k, t, u)))
    }

    pub fn horco(&self, t: &Term, u: &Term) -> Result<Option<Derivation>, OrderError> {
        self.check(t, u)?;
        Ok((1..=self.rounds).find_map(|k| self.horco_at(k, t, u)))
    }

    pub fn chain(&self, t: &Term, u: &Term, max_chain: usize) -> Result<Option<Vec<Derivation>>, OrderError> {
        self.check(t, u)?;
        Ok(self.chain_rec(t, u, max_chain))
    }

    fn whorco_at(&self, level: usize, t: &Term, u: &Term) -> Option<Derivation> {
        if level == 0 {
            return None;
        }
        let key = (t.clone(), u.clone());
        match self.whorco.borrow().get(&key) {
            Some(LevelMemo::Found(k, d)) if *k <= level => return Some(d.clone()),
            Some(LevelMemo::Failed(k)) if *k >= level => return None,
            _ => {}
        }
        let d = self.whorco_rules(level, t, u);
        let memo = match &d {
            Some(d) => LevelMemo::Found(level, d.clone()),
            None => LevelMemo::Failed(level),
        };
        self.whorco.borrow_mut().insert(key, memo);
        d
    }

    fn whorco_rules(&self, level: usize, t: &Term, u: &Term) -> Option<Derivation> {
        let (f, ts) = t.symbol_spine()?;
        if !u.free_vars().is_subset(&t.free_vars()) || t.type_of(self.sig).ok()? != u.type_of(self.sig).ok()? {
            return None;
        }
        let view = LevelView { horco: self, level: level - 1 };
        let args: Vec<Term> = ts.into_iter().cloned().collect();
        let search = ClosureSearch::new(self.sig, self.order, &view, f, &args, self.budget).ok()?;
        let d = search.member(u).ok()??;
        Some(Derivation::new(Label::Context, Judgement::gt(OrderKind::Whorco, t, u), vec![d]))
    }

    fn horco_at(&self, level: usize, t: &Term, u: &Term) -> Option<Derivation> {
        t.hole_pairs(u).into_iter().find_map(|(a, b)| {
            let d = self.whorco_at(level, &a, &b)?;
            Some(Derivation::new(Label::Context, Judgement::gt(OrderKind::Horco, t, u), vec![d]))
        })
    }

    /// Evidence for `t (→β ∪ >horco)⁺ u` with `>horco` of round `level`.
    fn reach_at(&self, level: usize, t: &Term, u: &Term, fuel: usize, cap: usize) -> Option<Derivation> {
        if t == u || fuel == 0 || t.size() > cap {
            return None;
        }
        let key = (level, t.clone(), u.clone(), fuel);
        if let Some(d) = self.reach.borrow().get(&key) {
            return d.clone();
        }
        // Provisional failure guards against cycles through congruence.
        self.reach.borrow_mut().insert(key.clone(), None);
        let d = self.reach_rules(level, t, u, fuel, cap);
        self.reach.borrow_mut().insert(key, d.clone());
        d
    }

    fn reach_rules(&self, level: usize, t: &Term, u: &Term, fuel: usize, cap: usize) -> Option<Derivation> {
        if level > 0 {
            if let Some(d) = self.horco_at(level, t, u) {
                return Some(steps(vec![t.clone(), u.clone()], vec![d]));
            }
        }
        for r in t.beta_reducts() {
            if r == *u {
                return Some(steps(vec![t.clone(), u.clone()], Vec::new()));
            }
            if let Some(rest) = self.reach_at(level, &r, u, fuel - 1, cap) {
                return Some(prepend(t, rest));
            }
        }
        match (t.node(), u.node()) {
            (Node::App(t1, t2), Node::App(u1, u2)) => {
                if t1 == u1 {
                    let d = self.reach_at(level, t2, u2, fuel, cap)?;
                    return Some(lift(&d, &|p| Term::app(t1.clone(), p.clone())));
                }
                if t2 == u2 {
                    let d = self.reach_at(level, t1, u1, fuel, cap)?;
                    return Some(lift(&d, &|p| Term::app(p.clone(), t2.clone())));
                }
                let d1 = self.reach_at(level, t1, u1, fuel, cap)?;
                let d2 = self.reach_at(level, t2, u2, fuel, cap)?;
                let left = lift(&d1, &|p| Term::app(p.clone(), t2.clone()));
                let right = lift(&d2, &|p| Term::app(u1.clone(), p.clone()));
                Some(concat(left, right))
            }
            (Node::Lam(..), Node::Lam(..)) => {
                let (v, tb, ub) = t.open_pair(u)?;
                let d = self.reach_at(level, &tb, &ub, fuel, cap)?;
                Some(lift(&d, &|p| Term::lam(&v, p)))
            }
            _ => None,
        }
    }

    fn chain_rec(&self, t: &Term, u: &Term, n: usize) -> Option<Vec<Derivation>> {
        if n == 0 || t == u {
            return None;
        }
        if let Some(&k) = self.chains.borrow().get(&(t.clone(), u.clone())) {
            if k >= n {
                return None;
            }
        }
        let found = self.horco(t, u).ok().flatten().map(|d| vec![d]).or_else(|| {
            if n == 1 {
                return None;
            }
            for v in self.intermediates(t, u) {
                let Some(first) = self.horco(t, &v).ok().flatten() else { continue };
                if let Some(mut rest) = self.chain_rec(&v, u, n - 1) {
                    rest.insert(0, first);
                    return Some(rest);
                }
            }
            None
        });
        if found.is_none() {
            self.chains.borrow_mut().insert((t.clone(), u.clone()), n);
        }
        found
    }

    /// Candidate middle terms for a chain from `t` to `u`: terms mixing the
    /// two at differing positions, and subterms of `t`, of the right type.
    fn intermediates(&self, t: &Term, u: &Term) -> Vec<Term> {
        let Ok(ty) = t.type_of(self.sig) else { return Vec::new() };
        let mut out: BTreeSet<Term> = mixtures(t, u);
        for (_, s) in t.positions() {
            if s.is_locally_closed() {
                out.insert(s);
            }
        }
        out.remove(t);
        out.remove(u);
        let mut v: Vec<Term> = out
            .into_iter()
            .filter(|m| m.type_of(self.sig).ok().as_ref() == Some(&ty) && m.free_vars().is_subset(&t.free_vars()))
            .collect();
        v.sort_by_key(Term::size);
        v
    }
}

fn mixtures(t: &Term, u: &Term) -> BTreeSet<Term> {
    let mut out: BTreeSet<Term> = [t.clone(), u.clone()].into_iter().collect();
    if t == u {
        return out;
    }
    match (t.node(), u.node()) {
        (Node::App(t1, t2), Node::App(u1, u2)) => {
            let ls = mixtures(t1, u1);
            let rs = mixtures(t2, u2);
            'outer: for l in &ls {
                for r in &rs {
                    if out.len() >= MIX_LIMIT {
                        break 'outer;
                    }
                    out.insert(Term::app(l.clone(), r.clone()));
                }
            }
        }
        (Node::Lam(..), Node::Lam(..)) => {
            if let Some((v, tb, ub)) = t.open_pair(u) {
                out.extend(mixtures(&tb, &ub).iter().map(|m| Term::lam(&v, m)));
            }
        }
        _ => {}
    }
    out
}

fn path_of(d: &Derivation) -> &[Term] {
    match &d.conclusion {
        Judgement::Steps(p) => p,
        _ => &[],
    }
}

fn prepend(t: &Term, rest: Derivation) -> Derivation {
    let mut path = vec![t.clone()];
    path.extend(path_of(&rest).iter().cloned());
    steps(path, rest.children)
}

fn concat(a: Derivation, b: Derivation) -> Derivation {
    let mut path = path_of(&a).to_vec();
    path.extend(path_of(&b).iter().skip(1).cloned());
    let mut children = a.children;
    children.extend(b.children);
    steps(path, children)
}

/// Places a reduction path and the conclusions of its context steps under
/// the same surrounding context.
fn lift(d: &Derivation, wrap: &dyn Fn(&Term) -> Term) -> Derivation {
    let path = path_of(d).iter().map(wrap).collect();
    let children = d
        .children
        .iter()
        .map(|c| match &c.conclusion {
            Judgement::Gt { order: OrderKind::Horco, left, right } => {
                Derivation::new(Label::Context, Judgement::gt(OrderKind::Horco, &wrap(left), &wrap(right)), c.children.clone())
            }
            _ => c.clone(),
        })
        .collect();
    steps(path, children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_trs;
    use crate::types::Type;

    fn oriented(src: &str) -> bool {
        let trs = parse_trs(src).unwrap();
        trs.rules().iter().all(|r| orient_rule(trs.sig(), trs.order(), trs.rules(), r, Budget::default()).unwrap().is_some())
    }

    #[test]
    fn example_rules() {
        assert!(oriented(include_str!("../../corpus/process_algebra.trs")));
        assert!(oriented(include_str!("../../corpus/lists_of_functions.trs")));
        assert!(!oriented(include_str!("../../corpus/differentiation.trs")));
    }

    #[test]
    fn free_variable_and_division() {
        let trs = parse_trs(include_str!("../../corpus/minus_div.trs")).unwrap();
        let results: Vec<bool> = trs
            .rules()
            .iter()
            .map(|r| orient_rule(trs.sig(), trs.order(), trs.rules(), r, Budget::default()).unwrap().is_some())
            .collect();
        assert_eq!(results, vec![true, true, true, false]);
        let x = Term::var_named("x", Type::base("N"));
        let y = Term::var_named("y", Type::base("N"));
        let bad = Rule::new_unchecked(Term::apps(Term::sym("minus"), [x.clone(), Term::sym("0")]), y);
        assert!(orient_rule(trs.sig(), trs.order(), trs.rules(), &bad, Budget::default()).unwrap().is_none());
        let var_lhs = Rule::new_unchecked(x.clone(), x);
        assert!(orient_rule(trs.sig(), trs.order(), trs.rules(), &var_lhs, Budget::default()).is_err());
    }

    #[test]
    fn whorco_and_context() {
        let trs = parse_trs(include_str!("../../corpus/minus_div.trs")).unwrap();
        let (sig, order) = (trs.sig(), trs.order());
        let n = Type::base("N");
        let x = Term::var_named("x", n.clone());
        let s = |t: Term| Term::app(Term::sym("s"), t);
        let minus = |a: Term, b: Term| Term::apps(Term::sym("minus"), [a, b]);
        let l = minus(s(x.clone()), s(Term::sym("0")));
        let r = minus(x.clone(), Term::sym("0"));
        let b = Budget::default();
        assert!(whorco_gt(sig, order, &l, &r, b).unwrap().is_some());
        assert!(whorco_gt(sig, order, &l, &l, b).unwrap().is_none());
        let d = horco_gt(sig, order, &s(l.clone()), &s(r.clone()), b).unwrap().unwrap();
        assert_eq!(d.label, Label::Context);
        assert!(whorco_gt(sig, order, &s(l.clone()), &s(r.clone()), b).unwrap().is_some());
        assert!(horco_chain_gt(sig, order, &l, &l, 3, b).unwrap().is_none());
        assert!(horco_chain_gt(sig, order, &l, &x, 3, b).unwrap().is_some());
    }
}
