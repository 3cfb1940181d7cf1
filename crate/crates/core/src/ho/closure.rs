//! Goal-directed search for membership in the higher-order computability
//! closure `CC[f](t⃗)` and for the argument ordering `⊐`.
//!
//! (var), (lam), (app), (prec) and (call) follow the structure of the goal.
//! (arg) and (decomp) are answered from a pool of members grown forward
//! from the arguments: accessible subterms, βR-reducts, and abstractions
//! applied to the goal's own variables. (red) tests whether the goal is
//! reachable from a pool member.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::budget::Budget;
use crate::derivation::{Derivation, Judgement, Label};
use crate::error::{OrderError, TypeError};
use crate::extension::status_ext;
use crate::polarity::acc_of_type;
use crate::precedence::{PrecCmp, SymbolOrder};
use crate::signature::Signature;
use crate::term::{Node, Term, Var};
use crate::types::{name, Name, Type};

use super::view::RuleView;

const POOL_LIMIT: usize = 512;
const FILL_LIMIT: usize = 16;

#[derive(Clone)]
enum Memo {
    Found(Derivation),
    Failed(usize),
}

/// Closure members derived so far, with their derivations.
type Pool = Vec<(Term, Derivation)>;

/// Search state for one root `f t⃗`. Memo tables live as long as the value.
pub struct ClosureSearch<'a, V: RuleView + ?Sized> {
    sig: &'a Signature,
    order: &'a SymbolOrder,
    view: &'a V,
    budget: Budget,
    f: Name,
    args: Vec<Term>,
    lhs_ty: Type,
    forbidden: BTreeSet<Var>,
    taken: BTreeSet<Name>,
    cap: Cell<usize>,
    members: RefCell<HashMap<Term, Memo>>,
    approxes: RefCell<HashMap<(Term, Term), Memo>>,
    pools: RefCell<HashMap<BTreeSet<Var>, Rc<Pool>>>,
}

impl<'a, V: RuleView + ?Sized> ClosureSearch<'a, V> {
    pub fn new(
        sig: &'a Signature,
        order: &'a SymbolOrder,
        view: &'a V,
        f: &str,
        args: &[Term],
        budget: Budget,
    ) -> Result<Self, OrderError> {
        let decl = sig.lookup(f).map_err(|_| TypeError::UndeclaredSymbol(name(f)))?;
        if args.len() > decl.ty.arity() {
            return Err(OrderError::Arity { sym: name(f), expected: decl.ty.arity(), found: args.len() });
        }
        let lhs = Term::apps(Term::sym(f), args.iter().cloned());
        let lhs_ty = lhs.type_of(sig)?;
        super::check_symbols(order, &lhs)?;
        let forbidden: BTreeSet<Var> = args.iter().flat_map(Term::free_vars).collect();
        let taken: BTreeSet<Name> = args.iter().flat_map(Term::names).collect();
        let cap = args.iter().map(Term::size).max().unwrap_or(1) + budget.max_term_size_slack;
        Ok(ClosureSearch {
            sig,
            order,
            view,
            budget,
            f: name(f),
            args: args.to_vec(),
            lhs_ty,
            forbidden,
            taken,
            cap: Cell::new(cap),
            members: RefCell::default(),
            approxes: RefCell::default(),
            pools: RefCell::default(),
        })
    }

    pub fn lhs_type(&self) -> &Type {
        &self.lhs_ty
    }

    fn widen(&self, t: &Term) {
        let want = t.size() + self.budget.max_term_size_slack;
        if want > self.cap.get() {
            self.cap.set(want);
            self.pools.borrow_mut().clear();
        }
    }

    /// `u ∈ CC[f](t⃗)`, by iterative deepening up to the depth budget.
    pub fn member(&self, u: &Term) -> Result<Option<Derivation>, OrderError> {
        u.type_of(self.sig)?;
        super::check_symbols(self.order, u)?;
        self.widen(u);
        Ok((1..=self.budget.max_search_depth).find_map(|d| self.member_at(u, d)))
    }

    /// `a ⊐[f](t⃗) b`.
    pub fn approx(&self, a: &Term, b: &Term) -> Result<Option<Derivation>, OrderError> {
        a.type_of(self.sig)?;
        b.type_of(self.sig)?;
        self.widen(a);
        self.widen(b);
        Ok((1..=self.budget.max_search_depth).find_map(|d| self.approx_at(a, b, d)))
    }

    fn member_concl(&self, u: &Term) -> Judgement {
        Judgement::Member { head: self.f.clone(), args: self.args.clone(), term: u.clone() }
    }

    fn approx_concl(&self, a: &Term, b: &Term) -> Judgement {
        Judgement::Approx { head: self.f.clone(), args: self.args.clone(), left: a.clone(), right: b.clone() }
    }

    fn scope_of<'t>(&self, ts: impl IntoIterator<Item = &'t Term>) -> BTreeSet<Var> {
        ts.into_iter().flat_map(Term::free_vars).filter(|v| !self.forbidden.contains(v)).collect()
    }

    fn member_at(&self, u: &Term, depth: usize) -> Option<Derivation> {
        if depth == 0 {
            return None;
        }
        match self.members.borrow().get(u) {
            Some(Memo::Found(d)) => return Some(d.clone()),
            Some(Memo::Failed(k)) if *k >= depth => return None,
            _ => {}
        }
        let d = self.member_rules(u, depth);
        let memo = match &d {
            Some(d) => Memo::Found(d.clone()),
            None => Memo::Failed(depth),
        };
        self.members.borrow_mut().insert(u.clone(), memo);
        d
    }

    fn member_rules(&self, u: &Term, depth: usize) -> Option<Derivation> {
        let pool = self.pool(&self.scope_of([u]));
        if let Some((_, d)) = pool.iter().find(|(p, _)| p == u) {
            return Some(d.clone());
        }
        let concl = || self.member_concl(u);
        match u.node() {
            Node::Var(x) if !self.forbidden.contains(x) => return Some(Derivation::leaf(Label::Var, concl())),
            Node::Sym(g) if self.order.cmp(&self.f, g).ok() == Some(PrecCmp::Greater) => {
                return Some(Derivation::leaf(Label::Prec, concl()));
            }
            Node::Lam(..) => {
                let mut avoid = self.taken.clone();
                avoid.extend(u.names());
                let (_, body) = u.open_lam(&avoid)?;
                if let Some(d) = self.member_at(&body, depth - 1) {
                    return Some(Derivation::new(Label::Lam, concl(), vec![d]));
                }
            }
            Node::App(fun, arg) => {
                if let Some(d) = self.call(u, depth) {
                    return Some(d);
                }
                if let Some(df) = self.member_at(fun, depth - 1) {
                    if let Some(da) = self.member_at(arg, depth - 1) {
                        return Some(Derivation::new(Label::App, concl(), vec![df, da]));
                    }
                }
            }
            _ => {}
        }
        let cap = self.cap.get();
        for (p, dp) in pool.iter() {
            if let Some(steps) = self.view.reaches(p, u, cap) {
                return Some(Derivation::new(Label::Red, concl(), vec![dp.clone(), steps]));
            }
        }
        None
    }

    /// (call): `g u⃗` with `f ≃ g` and the same type as `f t⃗`.
    fn call(&self, u: &Term, depth: usize) -> Option<Derivation> {
        let (g, us) = u.symbol_spine()?;
        if self.order.cmp(&self.f, g).ok()? != PrecCmp::Equivalent {
            return None;
        }
        if u.type_of(self.sig).ok()? != self.lhs_ty {
            return None;
        }
        let mut children = Vec::new();
        for uj in &us {
            children.push(self.member_at(uj, depth - 1)?);
        }
        let used = RefCell::new(Vec::new());
        let cap = self.cap.get();
        let rel = |a: &&Term, b: &&Term| {
            let ev = self.view.reaches(a, b, cap).or_else(|| self.approx_at(a, b, depth - 1));
            match ev {
                Some(d) => {
                    used.borrow_mut().push(d);
                    true
                }
                None => false,
            }
        };
        let args: Vec<&Term> = self.args.iter().collect();
        if !status_ext(self.order.status(&self.f), rel, &args, &us) {
            return None;
        }
        for d in used.into_inner() {
            if !children.contains(&d) {
                children.push(d);
            }
        }
        Some(Derivation::new(Label::Call, self.member_concl(u), children))
    }

    fn approx_at(&self, a: &Term, b: &Term, depth: usize) -> Option<Derivation> {
        if depth == 0 {
            return None;
        }
        let key = (a.clone(), b.clone());
        match self.approxes.borrow().get(&key) {
            Some(Memo::Found(d)) => return Some(d.clone()),
            Some(Memo::Failed(k)) if *k >= depth => return None,
            _ => {}
        }
        let d = self.approx_rules(a, b, depth);
        let memo = match &d {
            Some(d) => Memo::Found(d.clone()),
            None => Memo::Failed(depth),
        };
        self.approxes.borrow_mut().insert(key, memo);
        d
    }

    fn approx_rules(&self, a: &Term, b: &Term, depth: usize) -> Option<Derivation> {
        let concl = || self.approx_concl(a, b);
        let b_ty = b.type_of(self.sig).ok()?;

        // (⊐base)
        if let Some((g_out, accessible)) = self.full_base_application(a) {
            if b_ty == Type::Base(g_out) {
                let (_, a_args) = a.symbol_spine()?;
                let (h, b_args) = b.spine();
                for i in &accessible {
                    let ai = a_args[i - 1];
                    for k in 0..=b_args.len() {
                        if Term::apps(h.clone(), b_args[..k].iter().map(|t| (*t).clone())) != *ai {
                            continue;
                        }
                        let mut children = Vec::new();
                        let all = b_args[k..].iter().all(|bj| match self.member_at(bj, depth - 1) {
                            Some(d) => {
                                children.push(d);
                                true
                            }
                            None => false,
                        });
                        if all {
                            return Some(Derivation::new(Label::BaseApprox, concl(), children));
                        }
                    }
                }
            }
        }

        // (⊐lam)
        if let (Node::Lam(bind, _), Some((dom, _))) = (a.node(), b_ty.as_arrow()) {
            if bind.ty == *dom {
                let mut avoid = self.taken.clone();
                avoid.extend(a.names());
                avoid.extend(b.names());
                let (x, body) = a.open_lam(&avoid)?;
                let bx = Term::app(b.clone(), Term::var(x));
                if let Some(d) = self.approx_at(&body, &bx, depth - 1) {
                    return Some(Derivation::new(Label::LamApprox, concl(), vec![d]));
                }
            }
        }

        let cands = self.base_candidates(a, b, depth - 1);
        // (⊐red)
        let cap = self.cap.get();
        for (c, dc) in &cands {
            if let Some(steps) = self.view.reaches(c, b, cap) {
                return Some(Derivation::new(Label::RedApprox, concl(), vec![dc.clone(), steps]));
            }
        }
        // (⊐trans)
        for (c, dc) in &cands {
            if c == b {
                continue;
            }
            if let Some(d) = self.approx_at(c, b, depth - 1) {
                return Some(Derivation::new(Label::TransApprox, concl(), vec![dc.clone(), d]));
            }
        }
        None
    }

    /// For `a = g a⃗` with `g` fully applied: its output sort and `Acc(g)`.
    fn full_base_application(&self, a: &Term) -> Option<(Name, BTreeSet<usize>)> {
        let (g, a_args) = a.symbol_spine()?;
        let ty = self.sig.type_of(g)?;
        let (doms, out) = ty.flatten();
        if doms.len() != a_args.len() {
            return None;
        }
        let accessible = acc_of_type(ty);
        Some((out.clone(), accessible))
    }

    /// Terms `c` with a (⊐base) derivation of `a ⊐ c`: accessible arguments
    /// applied to members drawn from the pool and the free variables of `a`
    /// and `b`.
    fn base_candidates(&self, a: &Term, b: &Term, depth: usize) -> Vec<(Term, Derivation)> {
        let mut out = Vec::new();
        if depth == 0 {
            return out;
        }
        let Some((g_out, accessible)) = self.full_base_application(a) else { return out };
        let (_, a_args) = a.symbol_spine().unwrap();
        let scope = self.scope_of([a, b]);
        let pool = self.pool(&scope);
        for i in accessible {
            let ai = a_args[i - 1];
            let Ok(ty) = ai.type_of(self.sig) else { continue };
            let (doms, out_sort) = ty.flatten();
            if *out_sort != g_out {
                continue;
            }
            let mut fills: Vec<(Vec<Term>, Vec<Derivation>)> = vec![(Vec::new(), Vec::new())];
            for d in doms {
                let options: Vec<(Term, Derivation)> = scope
                    .iter()
                    .filter(|v| v.ty == *d)
                    .map(|v| {
                        let t = Term::var(v.clone());
                        let dv = Derivation::leaf(Label::Var, self.member_concl(&t));
                        (t, dv)
                    })
                    .chain(pool.iter().filter(|(p, _)| p.type_of(self.sig).ok().as_ref() == Some(d)).cloned())
                    .collect();
                let mut next = Vec::new();
                for (ts, ds) in &fills {
                    for (t, dt) in &options {
                        if next.len() >= FILL_LIMIT {
                            break;
                        }
                        let mut ts = ts.clone();
                        let mut ds = ds.clone();
                        ts.push(t.clone());
                        ds.push(dt.clone());
                        next.push((ts, ds));
                    }
                }
                fills = next;
            }
            for (ts, ds) in fills {
                let c = Term::apps(ai.clone(), ts);
                let d = Derivation::new(Label::BaseApprox, self.approx_concl(a, &c), ds);
                out.push((c, d));
            }
        }
        out
    }

    /// Members reachable forward from the arguments, for goals whose free
    /// variables outside `FV(t⃗)` are `scope`.
    fn pool(&self, scope: &BTreeSet<Var>) -> Rc<Vec<(Term, Derivation)>> {
        if let Some(p) = self.pools.borrow().get(scope) {
            return p.clone();
        }
        let cap = self.cap.get();
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut pool: Vec<(Term, Derivation)> = Vec::new();
        let mut next = 0;
        let push = |t: Term, d: Derivation, pool: &mut Vec<(Term, Derivation)>, index: &mut HashMap<Term, usize>| {
            if t.size() <= cap && !index.contains_key(&t) && pool.len() < POOL_LIMIT {
                index.insert(t.clone(), pool.len());
                pool.push((t, d));
            }
        };
        for a in &self.args {
            push(a.clone(), Derivation::leaf(Label::Arg, self.member_concl(a)), &mut pool, &mut index);
        }
        while next < pool.len() {
            let (m, dm) = pool[next].clone();
            next += 1;
            if let Some((g, ms)) = m.symbol_spine() {
                if let Some(ty) = self.sig.type_of(g) {
                    for i in acc_of_type(ty) {
                        if let Some(mi) = ms.get(i - 1) {
                            let d = Derivation::new(Label::Decomp, self.member_concl(mi), vec![dm.clone()]);
                            push((*mi).clone(), d, &mut pool, &mut index);
                        }
                    }
                }
            }
            if let Node::Lam(bind, _) = m.node() {
                for y in scope.iter().filter(|y| y.ty == bind.ty) {
                    let yt = Term::var(y.clone());
                    let my = Term::app(m.clone(), yt.clone());
                    let dy = Derivation::leaf(Label::Var, self.member_concl(&yt));
                    let d = Derivation::new(Label::App, self.member_concl(&my), vec![dm.clone(), dy]);
                    push(my, d, &mut pool, &mut index);
                }
            }
            for (r, steps) in self.view.forward(&m, cap) {
                let d = Derivation::new(Label::Red, self.member_concl(&r), vec![dm.clone(), steps]);
                push(r, d, &mut pool, &mut index);
            }
        }
        let pool = Rc::new(pool);
        self.pools.borrow_mut().insert(scope.clone(), pool.clone());
        pool
    }
}

/// A derivation of `u ∈ CC[f](args)` relative to `view`.
pub fn cc_ho_member<V: RuleView + ?Sized>(
    sig: &Signature,
    order: &SymbolOrder,
    view: &V,
    f: &str,
    args: &[Term],
    u: &Term,
    budget: Budget,
) -> Result<Option<Derivation>, OrderError> {
    ClosureSearch::new(sig, order, view, f, args, budget)?.member(u)
}

/// A derivation of `a ⊐[f](args) b` relative to `view`.
#[allow(clippy::too_many_arguments)]
pub fn size_approx_gt<V: RuleView + ?Sized>(
    sig: &Signature,
    order: &SymbolOrder,
    view: &V,
    f: &str,
    args: &[Term],
    a: &Term,
    b: &Term,
    budget: Budget,
) -> Result<Option<Derivation>, OrderError> {
    ClosureSearch::new(sig, order, view, f, args, budget)?.approx(a, b)
}
