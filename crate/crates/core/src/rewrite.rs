//! Rewrite rules, syntactic matching and bounded βR-reduction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{PrecedenceError, RuleError};
use crate::precedence::{Precedence, Statuses, SymbolOrder};
use crate::signature::Signature;
use crate::term::{rebind, Node, Subst, Term};
use crate::types::{Name, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    lhs: Term,
    rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term, sig: &Signature) -> Result<Rule, RuleError> {
        let lt = lhs.type_of(sig)?;
        let rt = rhs.type_of(sig)?;
        if lhs.head_symbol().is_none() {
            return Err(RuleError::LhsNotSymbolHeaded(lhs.to_string()));
        }
        let lfv = lhs.free_vars();
        if let Some(v) = rhs.free_vars().into_iter().find(|v| !lfv.contains(v)) {
            return Err(RuleError::FreeVariable(v.name));
        }
        if lt != rt {
            return Err(RuleError::TypeMismatch { lhs: lt, rhs: rt });
        }
        Ok(Rule { lhs, rhs })
    }

    /// A pair used as a rule without checking the rule invariants (for
    /// relations that are fed back as rewrite systems).
    pub fn new_unchecked(lhs: Term, rhs: Term) -> Rule {
        Rule { lhs, rhs }
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// Head symbol and arguments of the left-hand side.
    pub fn lhs_spine(&self) -> Option<(&Name, Vec<&Term>)> {
        self.lhs.symbol_spine()
    }
}

/// A signature, variable declarations, rules and the symbol ordering
/// parameters (precedence and statuses).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trs {
    sig: Signature,
    vars: BTreeMap<Name, Type>,
    rules: Vec<Rule>,
    order: SymbolOrder,
}

impl Trs {
    /// Statuses are taken from the signature declarations.
    pub fn new(
        sig: Signature,
        vars: BTreeMap<Name, Type>,
        rules: Vec<Rule>,
        prec: Precedence,
    ) -> Result<Trs, Vec<PrecedenceError>> {
        let order = SymbolOrder::new(prec, statuses_of(&sig))?;
        Ok(Trs { sig, vars, rules, order })
    }

    /// Empty precedence; variables collected from the rules.
    pub fn from_rules(sig: Signature, rules: Vec<Rule>) -> Trs {
        let vars = rules.iter().flat_map(|r| r.lhs.free_vars()).map(|v| (v.name, v.ty)).collect();
        let prec = Precedence::empty(sig.symbol_names().cloned());
        let order = SymbolOrder { prec, statuses: statuses_of(&sig) };
        Trs { sig, vars, rules, order }
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn vars(&self) -> &BTreeMap<Name, Type> {
        &self.vars
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn order(&self) -> &SymbolOrder {
        &self.order
    }

    pub fn with_order(&self, order: SymbolOrder) -> Trs {
        Trs { order, ..self.clone() }
    }

    pub fn with_rules(&self, rules: Vec<Rule>) -> Trs {
        Trs { rules, ..self.clone() }
    }

    /// `(C, D)`: symbols heading no left-hand side, and those heading one.
    pub fn constant_split(&self) -> (BTreeSet<Name>, BTreeSet<Name>) {
        let defined: BTreeSet<Name> = self.rules.iter().filter_map(|r| r.lhs.head_symbol().cloned()).collect();
        let constant = self.sig.symbol_names().filter(|s| !defined.contains(*s)).cloned().collect();
        (constant, defined)
    }

    pub fn defined_symbols(&self) -> BTreeSet<Name> {
        self.constant_split().1
    }

    /// First-order signature and rules made of fully applied symbols.
    pub fn is_first_order(&self) -> bool {
        self.sig.is_first_order() && self.rules.iter().all(|r| r.lhs.is_first_order(&self.sig) && r.rhs.is_first_order(&self.sig))
    }

    pub fn one_step_reducts(&self, t: &Term, kind: StepKind) -> BTreeSet<Term> {
        one_step_reducts(&self.sig, &self.rules, t, kind)
    }

    pub fn reducts_plus(&self, t: &Term, budget: ReductionBudget) -> BTreeSet<Term> {
        reducts_plus(&self.sig, &self.rules, t, budget)
    }
}

fn statuses_of(sig: &Signature) -> Statuses {
    let mut st = Statuses::new();
    for (f, d) in sig.symbols() {
        if let Some(s) = d.status {
            st.set(f.clone(), s);
        }
    }
    st
}

/// The unique substitution `σ` with `pattern σ = subject` (modulo alpha),
/// purely syntactically: a pattern application only matches a literal
/// application, and pattern variables never capture bound variables.
pub fn match_syntactic(pattern: &Term, subject: &Term, sig: &Signature) -> Option<Subst> {
    let mut sub = BTreeMap::new();
    if match_rec(pattern, subject, sig, &mut sub) {
        Some(Subst::from_pairs(sub))
    } else {
        None
    }
}

fn match_rec(p: &Term, s: &Term, sig: &Signature, sub: &mut BTreeMap<crate::term::Var, Term>) -> bool {
    match (p.node(), s.node()) {
        (Node::Var(v), _) => {
            if !s.is_locally_closed() {
                return false;
            }
            if let Some(prev) = sub.get(v) {
                return prev == s;
            }
            match s.type_of(sig) {
                Ok(ty) if ty == v.ty => {
                    sub.insert(v.clone(), s.clone());
                    true
                }
                _ => false,
            }
        }
        (Node::Bound(i), Node::Bound(j)) => i == j,
        (Node::Sym(f), Node::Sym(g)) => f == g,
        (Node::App(f1, a1), Node::App(f2, a2)) => match_rec(f1, f2, sig, sub) && match_rec(a1, a2, sig, sub),
        (Node::Lam(b1, t1), Node::Lam(b2, t2)) => b1 == b2 && match_rec(t1, t2, sig, sub),
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Beta,
    Rules,
    Both,
}

impl StepKind {
    fn beta(self) -> bool {
        matches!(self, StepKind::Beta | StepKind::Both)
    }
    fn rules(self) -> bool {
        matches!(self, StepKind::Rules | StepKind::Both)
    }
}

/// Root steps of `t`: a β-contraction and/or rule applications.
pub fn root_reducts(sig: &Signature, rules: &[Rule], t: &Term, kind: StepKind) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    if kind.beta() {
        if let Node::App(f, a) = t.node() {
            if let Some(r) = f.instantiate_body(a) {
                out.insert(r);
            }
        }
    }
    if kind.rules() {
        for rule in rules {
            if let Some(sub) = match_syntactic(&rule.lhs, t, sig) {
                out.insert(rule.rhs.substitute(&sub));
            }
        }
    }
    out
}

/// Every term obtained by one step at any position (binary application
/// nodes included, so partial applications are redex candidates too).
pub fn one_step_reducts(sig: &Signature, rules: &[Rule], t: &Term, kind: StepKind) -> BTreeSet<Term> {
    let mut out = root_reducts(sig, rules, t, kind);
    match t.node() {
        Node::Var(_) | Node::Bound(_) | Node::Sym(_) => {}
        Node::App(f, a) => {
            for f2 in one_step_reducts(sig, rules, f, kind) {
                out.insert(Term::app(f2, a.clone()));
            }
            for a2 in one_step_reducts(sig, rules, a, kind) {
                out.insert(Term::app(f.clone(), a2));
            }
        }
        Node::Lam(b, _) => {
            let (v, body) = t.open_lam(&BTreeSet::new()).expect("abstraction");
            for r in one_step_reducts(sig, rules, &body, kind) {
                out.insert(rebind(b, &v, &r));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionBudget {
    pub max_steps: usize,
    pub max_term_size: usize,
}

/// Terms reachable in 1..=max_steps βR-steps; terms above `max_term_size`
/// are neither returned nor expanded.
pub fn reducts_plus(sig: &Signature, rules: &[Rule], t: &Term, budget: ReductionBudget) -> BTreeSet<Term> {
    reducts_plus_kind(sig, rules, t, budget, StepKind::Both)
}

pub fn reducts_plus_kind(sig: &Signature, rules: &[Rule], t: &Term, budget: ReductionBudget, kind: StepKind) -> BTreeSet<Term> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![t.clone()];
    for _ in 0..budget.max_steps {
        let mut next = Vec::new();
        for u in &frontier {
            for r in one_step_reducts(sig, rules, u, kind) {
                if r.size() <= budget.max_term_size && seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Every term reachable from `t` in one or more steps within budget, with a
/// shortest path `t = p0 -> ... -> pn` to it.
pub fn reduction_paths(
    sig: &Signature,
    rules: &[Rule],
    t: &Term,
    budget: ReductionBudget,
    kind: StepKind,
) -> BTreeMap<Term, Vec<Term>> {
    let mut out: BTreeMap<Term, Vec<Term>> = BTreeMap::new();
    let mut frontier = vec![vec![t.clone()]];
    for _ in 0..budget.max_steps {
        let mut next = Vec::new();
        for path in &frontier {
            for r in one_step_reducts(sig, rules, path.last().unwrap(), kind) {
                if r.size() > budget.max_term_size || r == *t || out.contains_key(&r) {
                    continue;
                }
                let mut p = path.clone();
                p.push(r.clone());
                out.insert(r, p.clone());
                next.push(p);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}

/// A shortest βR path `t = p0 -> p1 -> ... -> u` within budget.
pub fn reduction_path(sig: &Signature, rules: &[Rule], t: &Term, u: &Term, budget: ReductionBudget) -> Option<Vec<Term>> {
    let mut prev: BTreeMap<Term, Term> = BTreeMap::new();
    let mut frontier = vec![t.clone()];
    for _ in 0..budget.max_steps {
        let mut next = Vec::new();
        for p in &frontier {
            for r in one_step_reducts(sig, rules, p, StepKind::Both) {
                if r.size() > budget.max_term_size || prev.contains_key(&r) || r == *t {
                    continue;
                }
                prev.insert(r.clone(), p.clone());
                if r == *u {
                    let mut path = vec![r];
                    while let Some(q) = prev.get(path.last().unwrap()) {
                        path.push(q.clone());
                        if q == t {
                            break;
                        }
                    }
                    path.reverse();
                    return Some(path);
                }
                next.push(r);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Var;

    fn b() -> Type {
        Type::base("B")
    }
    fn bb() -> Type {
        Type::arrow(b(), b())
    }
    fn sig() -> Signature {
        Signature::new()
            .with("0", b())
            .with("a", b())
            .with("b", b())
            .with("s", bb())
            .with("f", Type::arrows([b(), b()], b()))
            .with("minus", Type::arrows([b(), b()], b()))
            .with("div", Type::arrows([b(), b()], b()))
    }
    fn v(n: &str) -> Term {
        Term::var_named(n, b())
    }
    fn s(t: Term) -> Term {
        Term::app(Term::sym("s"), t)
    }
    fn minus(t: Term, u: Term) -> Term {
        Term::apps(Term::sym("minus"), [t, u])
    }
    fn minus_trs() -> Trs {
        let sg = sig();
        let rules = vec![
            Rule::new(minus(v("x"), Term::sym("0")), v("x"), &sg).unwrap(),
            Rule::new(minus(Term::sym("0"), v("x")), Term::sym("0"), &sg).unwrap(),
            Rule::new(minus(s(v("x")), s(v("y"))), minus(v("x"), v("y")), &sg).unwrap(),
        ];
        Trs::from_rules(sg, rules)
    }

    #[test]
    fn matching_examples() {
        let sg = sig();
        let fxx = Term::apps(Term::sym("f"), [v("x"), v("x")]);
        let faa = Term::apps(Term::sym("f"), [Term::sym("a"), Term::sym("a")]);
        let fab = Term::apps(Term::sym("f"), [Term::sym("a"), Term::sym("b")]);
        let m = match_syntactic(&fxx, &faa, &sg).unwrap();
        assert_eq!(fxx.substitute(&m), faa);
        assert_eq!(m.get(&Var::new("x", b())), Some(&Term::sym("a")));
        assert!(match_syntactic(&fxx, &fab, &sg).is_none());

        let ff = Var::new("F", bb());
        let z = Var::new("z", b());
        let pat = Term::app(Term::var(ff.clone()), v("x"));
        let id = Term::lam(&z, &Term::var(z.clone()));
        let subj = Term::app(id.clone(), v("y"));
        let m = match_syntactic(&pat, &subj, &sg).unwrap();
        assert_eq!(m.get(&ff), Some(&id));
        assert_eq!(m.get(&Var::new("x", b())), Some(&v("y")));
    }

    #[test]
    fn matching_does_not_capture() {
        let sg = sig();
        let x = Var::new("x", b());
        let pat = Term::lam(&x, &Term::app(Term::sym("s"), v("y")));
        let subj = Term::lam(&x, &Term::app(Term::sym("s"), v("x")));
        assert!(match_syntactic(&pat, &subj, &sg).is_none());
        let subj = Term::lam(&x, &Term::app(Term::sym("s"), Term::sym("0")));
        assert!(match_syntactic(&pat, &subj, &sg).is_some());
    }

    #[test]
    fn constant_split_examples() {
        let (c, d) = minus_trs().constant_split();
        assert!(c.contains("0") && c.contains("s"));
        assert!(d.contains("minus") && !d.contains("s"));
        let empty = Trs::from_rules(sig(), vec![]);
        assert!(empty.constant_split().1.is_empty());
    }

    #[test]
    fn one_step_examples() {
        let trs = minus_trs();
        let t = minus(s(Term::sym("0")), s(Term::sym("0")));
        let r = trs.one_step_reducts(&t, StepKind::Rules);
        assert_eq!(r, [minus(Term::sym("0"), Term::sym("0"))].into_iter().collect());
        assert!(trs.one_step_reducts(&v("x"), StepKind::Rules).is_empty());

        let empty = Trs::from_rules(sig(), vec![]);
        let x = Var::new("x", b());
        let redex = Term::app(Term::lam(&x, &Term::var(x.clone())), Term::sym("a"));
        assert_eq!(empty.one_step_reducts(&redex, StepKind::Both), [Term::sym("a")].into_iter().collect());
    }

    #[test]
    fn reducts_plus_examples() {
        let trs = minus_trs();
        let budget = ReductionBudget { max_steps: 2, max_term_size: 20 };
        let t = minus(s(v("x")), s(Term::sym("0")));
        let r = trs.reducts_plus(&t, budget);
        assert_eq!(r, [minus(v("x"), Term::sym("0")), v("x")].into_iter().collect());

        let x = Var::new("x", b());
        let y = Var::new("y", b());
        let inner = Term::app(Term::lam(&y, &Term::var(y.clone())), Term::sym("a"));
        let t = Term::app(Term::lam(&x, &Term::var(x.clone())), inner.clone());
        let r = trs.reducts_plus(&t, budget);
        // both redexes can fire first
        assert!(r.contains(&inner) && r.contains(&Term::sym("a")));
        assert!(trs.reducts_plus(&Term::sym("0"), budget).is_empty());
    }

    #[test]
    fn size_pruning_and_paths() {
        let trs = minus_trs();
        let t = minus(s(v("x")), s(Term::sym("0")));
        let tight = ReductionBudget { max_steps: 4, max_term_size: 1 };
        assert_eq!(trs.reducts_plus(&t, tight), BTreeSet::new());
        let budget = ReductionBudget { max_steps: 4, max_term_size: 20 };
        let path = reduction_path(trs.sig(), trs.rules(), &t, &v("x"), budget).unwrap();
        assert_eq!(path, vec![t.clone(), minus(v("x"), Term::sym("0")), v("x")]);
    }

    #[test]
    fn rule_invariants() {
        let sg = sig();
        assert!(matches!(Rule::new(v("x"), v("x"), &sg), Err(RuleError::LhsNotSymbolHeaded(_))));
        assert!(matches!(Rule::new(s(v("x")), v("y"), &sg), Err(RuleError::FreeVariable(_))));
        assert!(matches!(Rule::new(Term::sym("s"), Term::sym("0"), &sg), Err(RuleError::TypeMismatch { .. })));
    }
}
