//! Simply-typed terms with curried constants.
//!
//! Terms are locally nameless: free variables are named and carry their
//! type, bound variables are de Bruijn indices. Structural equality on
//! [`Term`] is therefore alpha-equivalence, and hashing/ordering are
//! alpha-invariant. Every operation that walks under a binder opens it with
//! a fresh named variable first, so the terms handed around are always
//! locally closed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{TermError, TypeError};
use crate::signature::Signature;
use crate::types::{name, Name, Type};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Name,
    pub ty: Type,
}

impl Var {
    pub fn new(name_: &str, ty: Type) -> Self {
        Var { name: name(name_), ty }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

/// Binder annotation. The name is only a printing hint and takes no part in
/// equality, hashing or ordering.
#[derive(Clone)]
pub struct Binder {
    pub hint: Name,
    pub ty: Type,
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
    }
}
impl Eq for Binder {}
impl std::hash::Hash for Binder {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ty.hash(state)
    }
}
impl PartialOrd for Binder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Binder {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ty.cmp(&other.ty)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Var(Var),
    /// de Bruijn index, 0 = innermost enclosing binder.
    Bound(u32),
    Sym(Name),
    App(Term, Term),
    Lam(Binder, Term),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Arc<Node>);

/// Term position: spine argument indices (1-based). Index 0 selects a
/// non-atomic head (an abstraction in function position); index 1 under an
/// abstraction selects its body, opened with a fresh variable.
pub type Position = Vec<usize>;

impl Term {
    fn mk(node: Node) -> Term {
        Term(Arc::new(node))
    }

    pub fn var(v: Var) -> Term {
        Term::mk(Node::Var(v))
    }

    pub fn var_named(n: &str, ty: Type) -> Term {
        Term::var(Var::new(n, ty))
    }

    pub fn sym(s: &str) -> Term {
        Term::mk(Node::Sym(name(s)))
    }

    pub fn sym_name(s: Name) -> Term {
        Term::mk(Node::Sym(s))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(Node::App(f, a))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// `\v. body`, abstracting every free occurrence of `v`.
    pub fn lam(v: &Var, body: &Term) -> Term {
        Term::mk(Node::Lam(Binder { hint: v.name.clone(), ty: v.ty.clone() }, body.abstract_var(v, 0)))
    }

    pub(crate) fn raw_lam(binder: Binder, body: Term) -> Term {
        Term::mk(Node::Lam(binder, body))
    }

    pub(crate) fn bound(i: u32) -> Term {
        Term::mk(Node::Bound(i))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.node() {
            Node::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_sym(&self) -> Option<&Name> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.node() {
            Node::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn is_lam(&self) -> bool {
        matches!(self.node(), Node::Lam(..))
    }

    pub fn binder(&self) -> Option<&Binder> {
        match self.node() {
            Node::Lam(b, _) => Some(b),
            _ => None,
        }
    }

    /// Head and arguments: `h a1 .. an`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Node::App(f, a) = cur.node() {
            args.push(a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn head_symbol(&self) -> Option<&Name> {
        self.spine().0.as_sym()
    }

    /// `(f, args)` when the spine head is a function symbol.
    pub fn symbol_spine(&self) -> Option<(&Name, Vec<&Term>)> {
        let (h, args) = self.spine();
        h.as_sym().map(|s| (s, args))
    }

    /// Number of Var/Sym/App/Lam nodes.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Var(_) | Node::Bound(_) | Node::Sym(_) => 1,
            Node::App(f, a) => 1 + f.size() + a.size(),
            Node::Lam(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut out);
        out
    }

    fn collect_fv(&self, out: &mut BTreeSet<Var>) {
        match self.node() {
            Node::Var(v) => {
                out.insert(v.clone());
            }
            Node::Bound(_) | Node::Sym(_) => {}
            Node::App(f, a) => {
                f.collect_fv(out);
                a.collect_fv(out);
            }
            Node::Lam(_, b) => b.collect_fv(out),
        }
    }

    pub fn free_var_names(&self) -> BTreeSet<Name> {
        self.free_vars().into_iter().map(|v| v.name).collect()
    }

    pub fn has_free_var(&self, v: &Var) -> bool {
        match self.node() {
            Node::Var(w) => w == v,
            Node::Bound(_) | Node::Sym(_) => false,
            Node::App(f, a) => f.has_free_var(v) || a.has_free_var(v),
            Node::Lam(_, b) => b.has_free_var(v),
        }
    }

    /// All variable and symbol names occurring in the term.
    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self.node() {
            Node::Var(v) => {
                out.insert(v.name.clone());
            }
            Node::Sym(s) => {
                out.insert(s.clone());
            }
            Node::Bound(_) => {}
            Node::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
            Node::Lam(_, b) => b.collect_names(out),
        }
    }

    pub fn symbols(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Node::Sym(s) = t.node() {
                out.insert(s.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self.node() {
            Node::App(g, a) => {
                g.visit(f);
                a.visit(f);
            }
            Node::Lam(_, b) => b.visit(f),
            _ => {}
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Term, depth: u32) -> bool {
            match t.node() {
                Node::Bound(i) => *i < depth,
                Node::Var(_) | Node::Sym(_) => true,
                Node::App(f, a) => go(f, depth) && go(a, depth),
                Node::Lam(_, b) => go(b, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn contains_lambda(&self) -> bool {
        match self.node() {
            Node::Lam(..) => true,
            Node::App(f, a) => f.contains_lambda() || a.contains_lambda(),
            _ => false,
        }
    }

    fn abstract_var(&self, v: &Var, depth: u32) -> Term {
        match self.node() {
            Node::Var(w) if w == v => Term::bound(depth),
            Node::Var(_) | Node::Bound(_) | Node::Sym(_) => self.clone(),
            Node::App(f, a) => Term::app(f.abstract_var(v, depth), a.abstract_var(v, depth)),
            Node::Lam(b, body) => Term::raw_lam(b.clone(), body.abstract_var(v, depth + 1)),
        }
    }

    /// Replaces the bound index `depth` by the locally closed `value`.
    fn instantiate(&self, value: &Term, depth: u32) -> Term {
        match self.node() {
            Node::Bound(i) if *i == depth => value.clone(),
            Node::Var(_) | Node::Bound(_) | Node::Sym(_) => self.clone(),
            Node::App(f, a) => Term::app(f.instantiate(value, depth), a.instantiate(value, depth)),
            Node::Lam(b, body) => Term::raw_lam(b.clone(), body.instantiate(value, depth + 1)),
        }
    }

    /// For `\x. b`, the body instantiated with `value`.
    pub fn instantiate_body(&self, value: &Term) -> Option<Term> {
        match self.node() {
            Node::Lam(_, body) => Some(body.instantiate(value, 0)),
            _ => None,
        }
    }

    /// Opens an abstraction with a variable named after the binder hint,
    /// fresh with respect to `avoid` and to the term's own free variables.
    pub fn open_lam(&self, avoid: &BTreeSet<Name>) -> Option<(Var, Term)> {
        let Node::Lam(b, _) = self.node() else { return None };
        let own = self.free_var_names();
        let fresh = fresh_name(&b.hint, |n| avoid.contains(n) || own.contains(n));
        let v = Var { name: fresh, ty: b.ty.clone() };
        let body = self.instantiate_body(&Term::var(v.clone()))?;
        Some((v, body))
    }

    pub fn type_of(&self, sig: &Signature) -> Result<Type, TypeError> {
        let mut ctx = Vec::new();
        self.type_in(sig, &mut ctx)
    }

    fn type_in(&self, sig: &Signature, ctx: &mut Vec<Type>) -> Result<Type, TypeError> {
        match self.node() {
            Node::Var(v) => Ok(v.ty.clone()),
            Node::Bound(i) => ctx.len().checked_sub(1 + *i as usize).map(|k| ctx[k].clone()).ok_or(TypeError::DanglingBound(*i)),
            Node::Sym(s) => sig.type_of(s).cloned().ok_or_else(|| TypeError::UndeclaredSymbol(s.clone())),
            Node::App(f, a) => {
                let ft = f.type_in(sig, ctx)?;
                let at = a.type_in(sig, ctx)?;
                match ft.as_arrow() {
                    Some((d, c)) if *d == at => Ok(c.clone()),
                    Some((d, _)) => Err(TypeError::Mismatch { arg: a.to_string(), expected: d.clone(), found: at }),
                    None => Err(TypeError::NotAFunction { fun: f.to_string(), ty: ft }),
                }
            }
            Node::Lam(b, body) => {
                ctx.push(b.ty.clone());
                let bt = body.type_in(sig, ctx);
                ctx.pop();
                Ok(Type::arrow(b.ty.clone(), bt?))
            }
        }
    }

    /// Capture-avoiding simultaneous substitution of free variables.
    pub fn substitute(&self, s: &Subst) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        self.subst_rec(s)
    }

    fn subst_rec(&self, s: &Subst) -> Term {
        match self.node() {
            Node::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Node::Bound(_) | Node::Sym(_) => self.clone(),
            Node::App(f, a) => Term::app(f.subst_rec(s), a.subst_rec(s)),
            Node::Lam(b, body) => Term::raw_lam(b.clone(), body.subst_rec(s)),
        }
    }

    /// Children of a node under the position scheme of [`Position`].
    pub fn children(&self) -> Vec<(usize, Term)> {
        match self.node() {
            Node::Var(_) | Node::Bound(_) | Node::Sym(_) => Vec::new(),
            Node::Lam(..) => {
                let (_, body) = self.open_lam(&BTreeSet::new()).expect("abstraction");
                vec![(1, body)]
            }
            Node::App(..) => {
                let (h, args) = self.spine();
                let mut out = Vec::new();
                if matches!(h.node(), Node::Lam(..) | Node::App(..)) {
                    out.push((0, h.clone()));
                }
                out.extend(args.into_iter().enumerate().map(|(i, a)| (i + 1, a.clone())));
                out
            }
        }
    }

    /// Every position with its subterm, root first (pre-order).
    pub fn positions(&self) -> Vec<(Position, Term)> {
        let mut out = Vec::new();
        self.positions_rec(&mut Vec::new(), &mut out);
        out
    }

    fn positions_rec(&self, prefix: &mut Position, out: &mut Vec<(Position, Term)>) {
        out.push((prefix.clone(), self.clone()));
        for (i, c) in self.children() {
            prefix.push(i);
            c.positions_rec(prefix, out);
            prefix.pop();
        }
    }

    pub fn subterm_at(&self, pos: &[usize]) -> Result<Term, TermError> {
        let mut cur = self.clone();
        for &i in pos {
            cur = cur
                .children()
                .into_iter()
                .find(|(j, _)| *j == i)
                .map(|(_, c)| c)
                .ok_or_else(|| TermError::InvalidPosition(pos.to_vec()))?;
        }
        Ok(cur)
    }

    /// `t[u]_p`, rejecting replacements that change the subterm's type.
    pub fn replace_at(&self, pos: &[usize], u: &Term, sig: &Signature) -> Result<Term, TermError> {
        let old = self.subterm_at(pos)?;
        let (from, to) = (old.type_of(sig)?, u.type_of(sig)?);
        if from != to {
            return Err(TermError::TypeChange { from, to });
        }
        self.replace_unchecked(pos, u).ok_or_else(|| TermError::InvalidPosition(pos.to_vec()))
    }

    fn replace_unchecked(&self, pos: &[usize], u: &Term) -> Option<Term> {
        let Some((&i, rest)) = pos.split_first() else {
            return Some(u.clone());
        };
        match self.node() {
            Node::Lam(b, _) if i == 1 => {
                let (v, body) = self.open_lam(&u.free_var_names())?;
                let new_body = body.replace_unchecked(rest, u)?;
                let mut lam = Term::lam(&v, &new_body);
                if let Node::Lam(_, nb) = lam.node() {
                    lam = Term::raw_lam(b.clone(), nb.clone());
                }
                Some(lam)
            }
            Node::App(..) => {
                let (h, args) = self.spine();
                let n = args.len();
                if i == 0 && matches!(h.node(), Node::Lam(..) | Node::App(..)) {
                    let nh = h.replace_unchecked(rest, u)?;
                    Some(Term::apps(nh, args.into_iter().cloned()))
                } else if (1..=n).contains(&i) {
                    let mut new_args: Vec<Term> = args.into_iter().cloned().collect();
                    new_args[i - 1] = new_args[i - 1].replace_unchecked(rest, u)?;
                    Some(Term::apps(h.clone(), new_args))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// All one-step beta reducts.
    pub fn beta_reducts(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.beta_rec(&mut out);
        out
    }

    fn beta_rec(&self, out: &mut BTreeSet<Term>) {
        match self.node() {
            Node::Var(_) | Node::Bound(_) | Node::Sym(_) => {}
            Node::App(f, a) => {
                if let Some(r) = f.instantiate_body(a) {
                    out.insert(r);
                }
                let mut fs = BTreeSet::new();
                f.beta_rec(&mut fs);
                out.extend(fs.into_iter().map(|f2| Term::app(f2, a.clone())));
                let mut args = BTreeSet::new();
                a.beta_rec(&mut args);
                out.extend(args.into_iter().map(|a2| Term::app(f.clone(), a2)));
            }
            Node::Lam(b, _) => {
                let (v, body) = self.open_lam(&BTreeSet::new()).expect("abstraction");
                let mut inner = BTreeSet::new();
                body.beta_rec(&mut inner);
                out.extend(inner.into_iter().map(|r| rebind(b, &v, &r)));
            }
        }
    }

    pub fn is_beta_normal(&self) -> bool {
        match self.node() {
            Node::Var(_) | Node::Bound(_) | Node::Sym(_) => true,
            Node::App(f, a) => !f.is_lam() && f.is_beta_normal() && a.is_beta_normal(),
            Node::Lam(_, b) => b.is_beta_normal(),
        }
    }

    pub fn is_first_order(&self, sig: &Signature) -> bool {
        match self.node() {
            Node::Var(v) => v.ty.is_base(),
            Node::Bound(_) | Node::Lam(..) => false,
            Node::Sym(_) | Node::App(..) => {
                let Some((f, args)) = self.symbol_spine() else { return false };
                let Some(ty) = sig.type_of(f) else { return false };
                let (doms, _) = ty.flatten();
                doms.len() == args.len() && doms.iter().all(|d| d.is_base()) && args.iter().all(|a| a.is_first_order(sig))
            }
        }
    }
}

impl Term {
    /// Opens two abstractions over the same binder type with one variable
    /// fresh for both.
    pub fn open_pair(&self, other: &Term) -> Option<(Var, Term, Term)> {
        let (Node::Lam(b1, _), Node::Lam(b2, _)) = (self.node(), other.node()) else { return None };
        if b1.ty != b2.ty {
            return None;
        }
        let mut avoid = self.names();
        avoid.extend(other.names());
        let (v, l) = self.open_lam(&avoid)?;
        let r = other.instantiate_body(&Term::var(v.clone()))?;
        Some((v, l, r))
    }

    /// Every `(a, b)` with `self = C[a]`, `other = C[b]` and `a != b`, for a
    /// one-hole context `C` (binary application nodes and binder bodies,
    /// the latter opened with [`Term::open_pair`]). Root pair first.
    pub fn hole_pairs(&self, other: &Term) -> Vec<(Term, Term)> {
        let mut out = Vec::new();
        hole_rec(self, other, &mut out);
        out
    }
}

fn hole_rec(t: &Term, u: &Term, out: &mut Vec<(Term, Term)>) {
    if t == u {
        return;
    }
    out.push((t.clone(), u.clone()));
    match (t.node(), u.node()) {
        (Node::App(f1, a1), Node::App(f2, a2)) => {
            if f1 == f2 {
                hole_rec(a1, a2, out);
            }
            if a1 == a2 {
                hole_rec(f1, f2, out);
            }
        }
        (Node::Lam(..), Node::Lam(..)) => {
            if let Some((_, l, r)) = t.open_pair(u) {
                hole_rec(&l, &r, out);
            }
        }
        _ => {}
    }
}

/// Re-abstracts `body` over `v`, keeping the original binder's hint.
pub(crate) fn rebind(b: &Binder, v: &Var, body: &Term) -> Term {
    Term::raw_lam(b.clone(), body.abstract_var(v, 0))
}

/// `hint`, or `hint1`, `hint2`, ... (trailing digits of the hint stripped),
/// whichever is first not rejected by `taken`.
pub fn fresh_name(hint: &str, taken: impl Fn(&str) -> bool) -> Name {
    if !taken(hint) {
        return name(hint);
    }
    let stem = hint.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..).map(|i| format!("{stem}{i}")).find(|c| !taken(c)).map(|c| name(&c)).expect("unbounded supply")
}

/// Finite map from variables to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(BTreeMap<Var, Term>);

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binding checked against the variable's type.
    pub fn bind(&mut self, v: Var, t: Term, sig: &Signature) -> Result<(), TermError> {
        let found = t.type_of(sig)?;
        if found != v.ty {
            return Err(TermError::IllTypedBinding { var: v.name.clone(), expected: v.ty.clone(), found });
        }
        self.0.insert(v, t);
        Ok(())
    }

    pub fn insert_unchecked(&mut self, v: Var, t: Term) {
        self.0.insert(v, t);
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        Subst(pairs.into_iter().collect())
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    /// `self ; then`: applying the result equals applying `self`, then `then`.
    pub fn compose(&self, then: &Subst) -> Subst {
        let mut out: BTreeMap<Var, Term> = self.0.iter().map(|(v, t)| (v.clone(), t.substitute(then))).collect();
        for (v, t) in &then.0 {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Subst(out)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::syntax::write_term(f, self)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::syntax::write_term(f, self)
    }
}
