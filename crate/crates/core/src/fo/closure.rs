//! Membership in the first-order computability closure of a rewrite system.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::budget::Budget;
use crate::derivation::{Derivation, Judgement, Label};
use crate::error::OrderError;
use crate::extension::status_ext;
use crate::polarity::acc;
use crate::precedence::PrecCmp;
use crate::rewrite::{reduction_paths, StepKind, Trs};
use crate::term::Term;
use crate::types::{name, Name};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoClosureOptions {
    pub decomp: bool,
}

impl Default for FoClosureOptions {
    fn default() -> Self {
        FoClosureOptions { decomp: true }
    }
}

const POOL_LIMIT: usize = 4096;

/// A derivation of `u ∈ CC[f](args)` for the rules of `trs`, where (red) and
/// the (call) comparison use bounded rewriting and the strict subterm order.
pub fn cc_fo_member(
    trs: &Trs,
    f: &str,
    args: &[Term],
    u: &Term,
    budget: Budget,
    opts: FoClosureOptions,
) -> Result<Option<Derivation>, OrderError> {
    let sig = trs.sig();
    let decl = sig.lookup(f).map_err(|_| crate::error::TypeError::UndeclaredSymbol(name(f)))?;
    if decl.ty.arity() != args.len() {
        return Err(OrderError::Arity { sym: name(f), expected: decl.ty.arity(), found: args.len() });
    }
    let lhs = Term::apps(Term::sym(f), args.iter().cloned());
    super::check_first_order(sig, trs.order(), &[&lhs, u])?;
    let cap = args.iter().chain([u]).map(Term::size).max().unwrap_or(1) + budget.max_term_size_slack;
    let search = FoClosure { trs, f: name(f), args: args.to_vec(), budget, cap, opts, reach: RefCell::default() };
    Ok(search.run(u))
}

struct FoClosure<'a> {
    trs: &'a Trs,
    f: Name,
    args: Vec<Term>,
    budget: Budget,
    cap: usize,
    opts: FoClosureOptions,
    reach: RefCell<HashMap<Term, Rc<Reachable>>>,
}

/// Terms reachable from a start term, each with its reduction path.
type Reachable = BTreeMap<Term, Vec<Term>>;

impl FoClosure<'_> {
    fn member_concl(&self, u: &Term) -> Judgement {
        Judgement::Member { head: self.f.clone(), args: self.args.clone(), term: u.clone() }
    }

    fn reach(&self, t: &Term) -> Rc<BTreeMap<Term, Vec<Term>>> {
        if let Some(r) = self.reach.borrow().get(t) {
            return r.clone();
        }
        let rb = self.budget.reduction(self.cap - self.budget.max_term_size_slack);
        let paths = Rc::new(reduction_paths(self.trs.sig(), self.trs.rules(), t, rb, StepKind::Both));
        self.reach.borrow_mut().insert(t.clone(), paths.clone());
        paths
    }

    fn pool(&self) -> HashMap<Term, Derivation> {
        let mut pool: HashMap<Term, Derivation> = HashMap::new();
        let mut work = Vec::new();
        for a in &self.args {
            if !pool.contains_key(a) {
                pool.insert(a.clone(), Derivation::leaf(Label::Arg, self.member_concl(a)));
                work.push(a.clone());
            }
        }
        while let Some(m) = work.pop() {
            if pool.len() > POOL_LIMIT {
                break;
            }
            let dm = pool[&m].clone();
            let mut new = Vec::new();
            if self.opts.decomp {
                if let Some((g, ms)) = m.symbol_spine() {
                    let accessible = acc(g, self.trs.sig()).unwrap_or_default();
                    for (i, mi) in ms.iter().enumerate() {
                        if accessible.contains(&(i + 1)) {
                            let d = Derivation::new(Label::Decomp, self.member_concl(mi), vec![dm.clone()]);
                            new.push(((*mi).clone(), d));
                        }
                    }
                }
            }
            for (r, path) in self.reach(&m).iter() {
                if r.size() > self.cap {
                    continue;
                }
                let steps = Derivation::leaf(Label::Red, Judgement::Steps(path.clone()));
                new.push((r.clone(), Derivation::new(Label::Red, self.member_concl(r), vec![dm.clone(), steps])));
            }
            for (t, d) in new {
                if !pool.contains_key(&t) {
                    pool.insert(t.clone(), d);
                    work.push(t);
                }
            }
        }
        pool
    }

    fn run(&self, u: &Term) -> Option<Derivation> {
        let pool = self.pool();
        let mut memo = HashMap::new();
        self.member(u, &pool, &mut memo, self.budget.max_search_depth)
    }

    fn member(
        &self,
        u: &Term,
        pool: &HashMap<Term, Derivation>,
        memo: &mut HashMap<Term, Option<Derivation>>,
        depth: usize,
    ) -> Option<Derivation> {
        if let Some(d) = pool.get(u) {
            return Some(d.clone());
        }
        if depth == 0 {
            return None;
        }
        if let Some(d) = memo.get(u) {
            return d.clone();
        }
        let d = self.build(u, pool, memo, depth);
        memo.insert(u.clone(), d.clone());
        d
    }

    /// (prec) and (call).
    fn build(
        &self,
        u: &Term,
        pool: &HashMap<Term, Derivation>,
        memo: &mut HashMap<Term, Option<Derivation>>,
        depth: usize,
    ) -> Option<Derivation> {
        let (g, us) = u.symbol_spine()?;
        let cmp = self.trs.order().cmp(&self.f, g).ok()?;
        if cmp == PrecCmp::NotGreaterOrEquiv {
            return None;
        }
        let mut children = Vec::new();
        for uj in &us {
            children.push(self.member(uj, pool, memo, depth - 1)?);
        }
        if cmp == PrecCmp::Greater {
            return Some(Derivation::new(Label::Prec, self.member_concl(u), children));
        }
        let used = RefCell::new(Vec::new());
        let rel = |a: &Term, b: &&Term| {
            if is_strict_subterm(b, a) {
                return true;
            }
            match self.reach(a).get(*b) {
                Some(path) => {
                    used.borrow_mut().push(Derivation::leaf(Label::Red, Judgement::Steps(path.clone())));
                    true
                }
                None => false,
            }
        };
        let args: Vec<&Term> = self.args.iter().collect();
        if !status_ext(self.trs.order().status(&self.f), |a: &&Term, b: &&Term| rel(a, b), &args, &us) {
            return None;
        }
        for d in used.into_inner() {
            if !children.contains(&d) {
                children.push(d);
            }
        }
        Some(Derivation::new(Label::Call, self.member_concl(u), children))
    }
}

pub(crate) fn is_strict_subterm(b: &Term, a: &Term) -> bool {
    a.positions().iter().skip(1).any(|(_, s)| s == b)
}
