//! Finite-universe Kleene iteration of the first-order closure operator:
//! `R0 = ∅`, `R(k+1) = CR(Rk)` restricted to a universe, up to stability.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::budget::Budget;
use crate::enumerate::enumerate_first_order;
use crate::extension::status_ext;
use crate::polarity::acc;
use crate::precedence::{PrecCmp, SymbolOrder};
use crate::rewrite::{one_step_reducts, Rule, StepKind};
use crate::signature::Signature;
use crate::term::{Term, Var};

use super::closure::is_strict_subterm;

/// How (red) and the (call) comparison use the current relation `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedVariant {
    /// `u →R⁺ v` in (red), `(→R⁺ ∪ ⊳)` in (call).
    Transitive,
    /// `(u, v) ∈ R` in both.
    SingleStep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixpointOptions {
    pub variant: RedVariant,
    pub decomp: bool,
}

impl Default for FixpointOptions {
    fn default() -> Self {
        FixpointOptions { variant: RedVariant::Transitive, decomp: true }
    }
}

pub type Relation = BTreeSet<(Term, Term)>;

/// The least fixpoint of the closure operator restricted to `universe`
/// (which should be closed under subterms). Closure members and (red)
/// intermediates range over all first-order terms up to
/// `budget.max_term_size_slack` nodes above the largest universe term.
pub fn rco_fixpoint_oracle(
    sig: &Signature,
    order: &SymbolOrder,
    universe: &[Term],
    budget: Budget,
    opts: FixpointOptions,
) -> Relation {
    if universe.is_empty() {
        return Relation::new();
    }
    let max = universe.iter().map(Term::size).max().unwrap_or(0);
    let vars: Vec<Var> = universe.iter().flat_map(Term::free_vars).collect::<BTreeSet<_>>().into_iter().collect();
    let mut ext: BTreeSet<Term> = universe.iter().cloned().collect();
    for sort in sig.sorts() {
        ext.extend(enumerate_first_order(sig, sort, max + budget.max_term_size_slack, &vars));
    }
    let ext: Vec<Term> = ext.into_iter().collect();
    let lhss: Vec<&Term> = universe.iter().filter(|t| t.head_symbol().is_some()).collect();
    let universe: HashSet<&Term> = universe.iter().collect();

    let mut rel = Relation::new();
    loop {
        let step = Step::new(sig, &ext, &rel, opts.variant);
        let mut next = Relation::new();
        for t in &lhss {
            let members = closure(sig, order, t, &ext, &step, opts);
            for u in members {
                if universe.contains(&u) && u.type_of(sig).ok() == t.type_of(sig).ok() {
                    next.insert(((*t).clone(), u));
                }
            }
        }
        if next == rel {
            return rel;
        }
        rel = next;
    }
}

/// The (red) successor relation induced by the current `R`.
struct Step<'a> {
    rel: &'a Relation,
    variant: RedVariant,
    plus: HashMap<Term, HashSet<Term>>,
    single: HashMap<Term, Vec<Term>>,
}

impl<'a> Step<'a> {
    fn new(sig: &Signature, ext: &[Term], rel: &'a Relation, variant: RedVariant) -> Self {
        let mut plus = HashMap::new();
        if variant == RedVariant::Transitive && !rel.is_empty() {
            let rules: Vec<Rule> = rel.iter().map(|(l, r)| Rule::new_unchecked(l.clone(), r.clone())).collect();
            let inside: HashSet<&Term> = ext.iter().collect();
            let one: HashMap<&Term, Vec<Term>> = ext
                .iter()
                .map(|a| {
                    let rs = one_step_reducts(sig, &rules, a, StepKind::Rules);
                    (a, rs.into_iter().filter(|r| inside.contains(r)).collect())
                })
                .collect();
            for a in ext {
                let mut seen = HashSet::new();
                let mut queue: VecDeque<&Term> = one[a].iter().collect();
                while let Some(b) = queue.pop_front() {
                    if seen.insert(b.clone()) {
                        queue.extend(one[b].iter());
                    }
                }
                plus.insert(a.clone(), seen);
            }
        }
        let mut single: HashMap<Term, Vec<Term>> = HashMap::new();
        for (l, r) in rel {
            single.entry(l.clone()).or_default().push(r.clone());
        }
        Step { rel, variant, plus, single }
    }

    fn successors(&self, a: &Term) -> Vec<Term> {
        match self.variant {
            RedVariant::Transitive => self.plus.get(a).map(|s| s.iter().cloned().collect()).unwrap_or_default(),
            RedVariant::SingleStep => self.single.get(a).cloned().unwrap_or_default(),
        }
    }

    /// The relation compared by the status extension in (call).
    fn call_rel(&self, a: &Term, b: &Term) -> bool {
        match self.variant {
            RedVariant::Transitive => is_strict_subterm(b, a) || self.plus.get(a).is_some_and(|s| s.contains(b)),
            RedVariant::SingleStep => self.rel.contains(&(a.clone(), b.clone())),
        }
    }
}

/// `CC[f](ts) ∩ ext` for `t = f ts`, by saturation.
fn closure(sig: &Signature, order: &SymbolOrder, t: &Term, ext: &[Term], step: &Step, opts: FixpointOptions) -> HashSet<Term> {
    let (f, ts) = t.symbol_spine().expect("symbol-headed");
    let ts: Vec<Term> = ts.into_iter().cloned().collect();
    let status = order.status(f);
    let mut members: HashSet<Term> = HashSet::new();
    let mut work: Vec<Term> = ts.clone();

    let candidates: Vec<(&Term, PrecCmp)> = ext
        .iter()
        .filter_map(|w| {
            let (g, _) = w.symbol_spine()?;
            match order.cmp(f, g).ok()? {
                PrecCmp::NotGreaterOrEquiv => None,
                c => Some((w, c)),
            }
        })
        .collect();

    loop {
        while let Some(m) = work.pop() {
            if !members.insert(m.clone()) {
                continue;
            }
            if opts.decomp {
                if let Some((g, ms)) = m.symbol_spine() {
                    let accessible = acc(g, sig).unwrap_or_default();
                    for (i, mi) in ms.into_iter().enumerate() {
                        if accessible.contains(&(i + 1)) && !members.contains(mi) {
                            work.push(mi.clone());
                        }
                    }
                }
            }
            for v in step.successors(&m) {
                if !members.contains(&v) {
                    work.push(v);
                }
            }
        }
        for (w, cmp) in &candidates {
            if members.contains(*w) {
                continue;
            }
            let (_, ws) = w.symbol_spine().unwrap();
            if !ws.iter().all(|wi| members.contains(*wi)) {
                continue;
            }
            let ok = match cmp {
                PrecCmp::Greater => true,
                _ => {
                    let ws: Vec<Term> = ws.into_iter().cloned().collect();
                    status_ext(status, |a: &Term, b: &Term| step.call_rel(a, b), &ts, &ws)
                }
            };
            if ok {
                work.push((*w).clone());
            }
        }
        if work.is_empty() {
            return members;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precedence::{Precedence, Statuses};
    use crate::types::{name, Type};

    fn b() -> Type {
        Type::base("B")
    }

    fn sig() -> Signature {
        Signature::new().with("0", b()).with("s", Type::arrow(b(), b()))
    }

    #[test]
    fn empty_universe() {
        let prec = Precedence::empty(sig().symbol_names().cloned());
        let order = SymbolOrder::new(prec, Statuses::new()).unwrap();
        assert!(rco_fixpoint_oracle(&sig(), &order, &[], Budget::default(), Default::default()).is_empty());
    }

    #[test]
    fn successor_chain() {
        let prec = Precedence::from_decls(sig().symbol_names().cloned(), [(name("s"), name("0"))], []).unwrap();
        let order = SymbolOrder::new(prec, Statuses::new()).unwrap();
        let x = Var::new("x", b());
        let universe = enumerate_first_order(&sig(), "B", 5, std::slice::from_ref(&x));
        let budget = Budget { max_term_size_slack: 2, ..Budget::default() };
        let rel = rco_fixpoint_oracle(&sig(), &order, &universe, budget, Default::default());
        let s = |t: Term| Term::app(Term::sym("s"), t);
        let vx = Term::var(x);
        assert!(rel.contains(&(s(s(vx.clone())), vx.clone())));
        assert!(rel.contains(&(s(vx.clone()), Term::sym("0"))));
        assert!(!rel.contains(&(s(vx.clone()), s(vx.clone()))));
        let single = FixpointOptions { variant: RedVariant::SingleStep, decomp: true };
        assert_eq!(rco_fixpoint_oracle(&sig(), &order, &universe, budget, single), rel);
    }
}
