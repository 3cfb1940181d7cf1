//! Independent re-checking of derivations: every node must instantiate its
//! inference rule, with side-conditions recomputed from scratch.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::derivation::{Derivation, Judgement, Label, OrderKind};
use crate::extension::status_ext;
use crate::polarity::acc_of_type;
use crate::precedence::{PrecCmp, Status, SymbolOrder};
use crate::rewrite::{one_step_reducts, Rule, StepKind};
use crate::signature::Signature;
use crate::term::{Node, Term, Var};
use crate::types::{Name, Type};

/// What a derivation is checked against.
#[derive(Clone, Copy)]
pub struct ValidationContext<'a> {
    pub sig: &'a Signature,
    pub order: &'a SymbolOrder,
    /// The rules behind `→βR` steps.
    pub rules: &'a [Rule],
    /// Whether (call) may compare arguments by the strict subterm relation,
    /// as in the first-order closure.
    pub first_order: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid {label} node for `{conclusion}`: {reason}")]
pub struct ValidationError {
    pub label: Label,
    pub conclusion: String,
    pub reason: String,
}

/// `Ok` iff every node of `d` is a correct rule instance.
pub fn validate_derivation(d: &Derivation, ctx: &ValidationContext) -> Result<(), ValidationError> {
    Checker { ctx }.node(d)
}

struct Checker<'c, 'a> {
    ctx: &'c ValidationContext<'a>,
}

type Check = Result<(), String>;

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn owned(ts: Vec<&Term>) -> Vec<Term> {
    ts.into_iter().cloned().collect()
}

fn is_strict_subterm(b: &Term, a: &Term) -> bool {
    a != b && a.positions().iter().any(|(_, s)| s == b)
}

impl Checker<'_, '_> {
    fn node(&self, d: &Derivation) -> Result<(), ValidationError> {
        self.rule(d).map_err(|reason| ValidationError { label: d.label, conclusion: d.conclusion.to_string(), reason })?;
        d.children.iter().try_for_each(|c| self.node(c))
    }

    fn ty(&self, t: &Term) -> Result<Type, String> {
        t.type_of(self.ctx.sig).map_err(|e| format!("ill-typed term `{t}`: {e}"))
    }

    fn prec(&self, f: &str, g: &str) -> Result<PrecCmp, String> {
        self.ctx.order.cmp(f, g).map_err(|e| e.to_string())
    }

    fn rule(&self, d: &Derivation) -> Check {
        match &d.conclusion {
            Judgement::Gt { order, left, right } => {
                self.ty(left)?;
                self.ty(right)?;
                match order {
                    OrderKind::Rpo => self.rpo(d, left, right),
                    OrderKind::Rco => self.rco(d, left, right),
                    OrderKind::Horpo => self.horpo(d, left, right),
                    OrderKind::Whorco => self.whorco(d, left, right),
                    OrderKind::Horco => self.horco(d, left, right),
                }
            }
            Judgement::Member { head, args, term } => {
                self.ty(term)?;
                self.same_root(d, head, args)?;
                self.member(d, head, args, term)
            }
            Judgement::Approx { head, args, left, right } => {
                self.ty(left)?;
                self.ty(right)?;
                self.same_root(d, head, args)?;
                self.approx(d, head, args, left, right)
            }
            Judgement::Steps(path) => self.steps(d, path),
        }
    }

    fn same_root(&self, d: &Derivation, head: &Name, args: &[Term]) -> Check {
        for c in &d.children {
            match &c.conclusion {
                Judgement::Member { head: h, args: a, .. } | Judgement::Approx { head: h, args: a, .. } => {
                    ensure(h == head && a == args, || "premise about a different root term".into())?;
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn gt_child(&self, d: &Derivation, order: OrderKind, a: &Term, b: &Term) -> bool {
        d.children.iter().any(|c| c.conclusion == Judgement::gt(order, a, b))
    }

    fn no_children(d: &Derivation) -> Check {
        ensure(d.children.is_empty(), || "unexpected premises".into())
    }

    fn spine(t: &Term) -> Result<(Name, Vec<Term>), String> {
        let (f, ts) = t.symbol_spine().ok_or_else(|| format!("`{t}` is not headed by a symbol"))?;
        Ok((f.clone(), owned(ts)))
    }

    // --- first-order path ordering ---

    fn rpo(&self, d: &Derivation, t: &Term, u: &Term) -> Check {
        let (f, ts) = Self::spine(t)?;
        let gt = |a: &Term, b: &Term| self.gt_child(d, OrderKind::Rpo, a, b);
        match d.label {
            Label::Rpo(1) => {
                if d.children.is_empty() {
                    ensure(ts.contains(u), || "right side is not an argument".into())
                } else {
                    ensure(ts.iter().any(|ti| gt(ti, u)), || "no premise t_i > u".into())
                }
            }
            Label::Rpo(2) | Label::Rpo(3) => {
                let (g, us) = Self::spine(u)?;
                let cmp = self.prec(&f, &g)?;
                ensure(us.iter().all(|uj| gt(t, uj)), || "missing premise t > u_j".into())?;
                if d.label == Label::Rpo(2) {
                    ensure(cmp == PrecCmp::Greater, || format!("`{f}` is not above `{g}`"))
                } else {
                    ensure(cmp == PrecCmp::Equivalent, || format!("`{f}` and `{g}` are not equivalent"))?;
                    self.status(&f, &ts, &us, |a, b| gt(a, b))
                }
            }
            l => Err(format!("label {l} does not conclude an rpo comparison")),
        }
    }

    fn status(&self, f: &str, ts: &[Term], us: &[Term], rel: impl Fn(&Term, &Term) -> bool) -> Check {
        ensure(status_ext(self.ctx.order.status(f), rel, ts, us), || {
            format!("arguments are not decreasing in the {} extension", self.ctx.order.status(f))
        })
    }

    // --- first-order computability ordering ---

    fn rco(&self, d: &Derivation, t: &Term, u: &Term) -> Check {
        let (f, ts) = Self::spine(t)?;
        let gt = |a: &Term, b: &Term| self.gt_child(d, OrderKind::Rco, a, b);
        match d.label {
            Label::Arg => {
                Self::no_children(d)?;
                ensure(ts.contains(u), || "right side is not an argument".into())
            }
            Label::Prec | Label::Call => {
                let (g, us) = Self::spine(u)?;
                let cmp = self.prec(&f, &g)?;
                ensure(us.iter().all(|uj| gt(t, uj)), || "missing premise t > u_j".into())?;
                if d.label == Label::Prec {
                    ensure(cmp == PrecCmp::Greater, || format!("`{f}` is not above `{g}`"))
                } else {
                    ensure(cmp == PrecCmp::Equivalent, || format!("`{f}` and `{g}` are not equivalent"))?;
                    self.status(&f, &ts, &us, |a, b| a.head_symbol().is_some() && gt(a, b))
                }
            }
            Label::Red => {
                let [arg, rest] = d.children.as_slice() else { return Err("expected two premises".into()) };
                let Judgement::Gt { order: OrderKind::Rco, left, right } = &arg.conclusion else {
                    return Err("first premise is not an rco comparison".into());
                };
                ensure(arg.label == Label::Arg && left == t && ts.contains(right), || {
                    "first premise is not t > t_i by (arg)".into()
                })?;
                ensure(right.head_symbol().is_some(), || "t_i is not headed by a symbol".into())?;
                ensure(rest.conclusion == Judgement::gt(OrderKind::Rco, right, u), || "second premise is not t_i > u".into())
            }
            Label::Decomp => {
                let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
                let Judgement::Gt { order: OrderKind::Rco, left, right: w } = &c.conclusion else {
                    return Err("premise is not an rco comparison".into());
                };
                ensure(left == t && is_strict_subterm(w, t), || "premise is not t > w for a strict subterm w".into())?;
                let (_, ws) = Self::spine(w)?;
                ensure(ws.contains(u), || "right side is not an argument of w".into())
            }
            l => Err(format!("label {l} does not conclude an rco comparison")),
        }
    }

    // --- HORPO ---

    /// `P(f, t⃗, v)` as witnessed by the premises.
    fn p(&self, d: &Derivation, t: &Term, ts: &[Term], v: &Term) -> bool {
        ts.contains(v)
            || self.gt_child(d, OrderKind::Horpo, t, v)
            || ts.iter().any(|tj| self.gt_child(d, OrderKind::Horpo, tj, v))
    }

    fn horpo(&self, d: &Derivation, t: &Term, u: &Term) -> Check {
        ensure(self.ty(t)? == self.ty(u)?, || "sides have different types".into())?;
        let gt = |a: &Term, b: &Term| self.gt_child(d, OrderKind::Horpo, a, b);
        match d.label {
            Label::Horpo(1) => {
                let (_, ts) = Self::spine(t)?;
                if d.children.is_empty() {
                    ensure(ts.contains(u), || "right side is not an argument".into())
                } else {
                    ensure(ts.iter().any(|ti| gt(ti, u)), || "no premise t_i > u".into())
                }
            }
            Label::Horpo(n @ 2..=4) => {
                let (f, ts) = Self::spine(t)?;
                let (g, us) = Self::spine(u)?;
                let cmp = self.prec(&f, &g)?;
                let status = self.ctx.order.status(&f);
                if n == 2 {
                    ensure(cmp == PrecCmp::Greater, || format!("`{f}` is not above `{g}`"))?;
                } else {
                    ensure(cmp == PrecCmp::Equivalent, || format!("`{f}` and `{g}` are not equivalent"))?;
                    ensure((status == Status::Mul) == (n == 3), || format!("status of `{f}` is {status}"))?;
                    self.status(&f, &ts, &us, |a, b| gt(a, b))?;
                }
                if n != 3 {
                    ensure(us.iter().all(|uj| self.p(d, t, &ts, uj)), || "P(f, t, u_j) not established".into())?;
                }
                Ok(())
            }
            Label::Horpo(5) => {
                let (_, ts) = Self::spine(t)?;
                let (h, args) = u.spine();
                let ok = (0..args.len()).any(|k| {
                    let head = Term::apps(h.clone(), args[..k].iter().map(|a| (*a).clone()));
                    self.p(d, t, &ts, &head) && args[k..].iter().all(|a| self.p(d, t, &ts, a))
                });
                ensure(ok, || "no grouping of the right side satisfies P".into())
            }
            Label::Horpo(6) => {
                let (Node::App(t1, t2), Node::App(u1, u2)) = (t.node(), u.node()) else {
                    return Err("sides are not applications".into());
                };
                let ge = |a: &Term, b: &Term| a == b || gt(a, b);
                ensure(ge(t1, u1) && ge(t2, u2) && (t1 != u1 || t2 != u2), || "components are not decreasing".into())
            }
            Label::Horpo(7) => {
                let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
                let Judgement::Gt { order: OrderKind::Horpo, left, right } = &c.conclusion else {
                    return Err("premise is not a horpo comparison".into());
                };
                ensure(abstracts_pair(t, u, left, right), || "premise is not the comparison of the bodies".into())
            }
            l => Err(format!("label {l} does not conclude a horpo comparison")),
        }
    }

    // --- HORCO ---

    fn whorco(&self, d: &Derivation, t: &Term, u: &Term) -> Check {
        ensure(d.label == Label::Context, || "expected a context node".into())?;
        let (f, ts) = Self::spine(t)?;
        ensure(u.free_vars().is_subset(&t.free_vars()), || "right side has extra free variables".into())?;
        ensure(self.ty(t)? == self.ty(u)?, || "sides have different types".into())?;
        let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
        let want = Judgement::Member { head: f, args: ts, term: u.clone() };
        ensure(c.conclusion == want, || "premise is not closure membership of the right side".into())
    }

    fn horco(&self, d: &Derivation, t: &Term, u: &Term) -> Check {
        ensure(d.label == Label::Context, || "expected a context node".into())?;
        let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
        let Judgement::Gt { order: OrderKind::Whorco, left, right } = &c.conclusion else {
            return Err("premise is not a whorco comparison".into());
        };
        ensure(in_context(t, u, left, right), || "premise is not in a common context".into())
    }

    fn steps(&self, d: &Derivation, path: &[Term]) -> Check {
        ensure(d.label == Label::Red, || "reduction paths are justified by red".into())?;
        ensure(path.len() >= 2, || "empty reduction".into())?;
        for c in &d.children {
            ensure(matches!(c.conclusion, Judgement::Gt { order: OrderKind::Horco | OrderKind::Whorco, .. }), || {
                "only ordering steps may justify a reduction".into()
            })?;
        }
        for w in path.windows(2) {
            let by_child = self.gt_child(d, OrderKind::Horco, &w[0], &w[1]) || self.gt_child(d, OrderKind::Whorco, &w[0], &w[1]);
            if by_child {
                continue;
            }
            let reducts = one_step_reducts(self.ctx.sig, self.ctx.rules, &w[0], StepKind::Both);
            ensure(reducts.contains(&w[1]), || format!("`{}` is not a one-step reduct of `{}`", w[1], w[0]))?;
        }
        Ok(())
    }

    // --- closure membership ---

    fn member_child<'d>(d: &'d Derivation, u: &Term) -> Option<&'d Derivation> {
        d.children.iter().find(|c| matches!(&c.conclusion, Judgement::Member { term, .. } if term == u))
    }

    fn steps_child(d: &Derivation, a: &Term, b: &Term) -> bool {
        d.children.iter().any(|c| matches!(&c.conclusion, Judgement::Steps(p) if p.first() == Some(a) && p.last() == Some(b)))
    }

    fn approx_child(d: &Derivation, a: &Term, b: &Term) -> bool {
        d.children.iter().any(|c| matches!(&c.conclusion, Judgement::Approx { left, right, .. } if left == a && right == b))
    }

    fn forbidden(args: &[Term]) -> BTreeSet<Var> {
        args.iter().flat_map(Term::free_vars).collect()
    }

    fn member(&self, d: &Derivation, f: &Name, ts: &[Term], u: &Term) -> Check {
        match d.label {
            Label::Arg => {
                Self::no_children(d)?;
                ensure(ts.contains(u), || "term is not an argument".into())
            }
            Label::Decomp => {
                let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
                let Judgement::Member { term: w, .. } = &c.conclusion else {
                    return Err("premise is not a membership".into());
                };
                let (g, ws) = Self::spine(w)?;
                let ty = self.ctx.sig.type_of(&g).ok_or_else(|| format!("undeclared `{g}`"))?;
                let acc = acc_of_type(ty);
                ensure(ws.iter().enumerate().any(|(i, wi)| wi == u && acc.contains(&(i + 1))), || {
                    format!("term is not an accessible argument of `{w}`")
                })
            }
            Label::Prec => {
                let (g, us) = Self::spine(u)?;
                ensure(self.prec(f, &g)? == PrecCmp::Greater, || format!("`{f}` is not above `{g}`"))?;
                ensure(us.iter().all(|uj| Self::member_child(d, uj).is_some()), || "missing membership of an argument".into())
            }
            Label::Call => {
                let (g, us) = Self::spine(u)?;
                ensure(self.prec(f, &g)? == PrecCmp::Equivalent, || format!("`{f}` and `{g}` are not equivalent"))?;
                if !self.ctx.first_order {
                    let lhs = Term::apps(Term::sym_name(f.clone()), ts.iter().cloned());
                    ensure(self.ty(&lhs)? == self.ty(u)?, || "call changes the type".into())?;
                }
                ensure(us.iter().all(|uj| Self::member_child(d, uj).is_some()), || "missing membership of an argument".into())?;
                self.status(f, ts, &us, |a, b| {
                    Self::steps_child(d, a, b) || Self::approx_child(d, a, b) || (self.ctx.first_order && is_strict_subterm(b, a))
                })
            }
            Label::Red => {
                let [m, s] = d.children.as_slice() else { return Err("expected two premises".into()) };
                let Judgement::Member { term: v, .. } = &m.conclusion else {
                    return Err("first premise is not a membership".into());
                };
                ensure(matches!(&s.conclusion, Judgement::Steps(p) if p.first() == Some(v) && p.last() == Some(u)), || {
                    "second premise is not a reduction to the term".into()
                })
            }
            Label::App => {
                let Node::App(a, b) = u.node() else { return Err("term is not an application".into()) };
                ensure(Self::member_child(d, a).is_some() && Self::member_child(d, b).is_some(), || {
                    "missing membership of a component".into()
                })
            }
            Label::Var => {
                Self::no_children(d)?;
                let x = u.as_var().ok_or("term is not a variable")?;
                ensure(!Self::forbidden(ts).contains(x), || format!("`{}` is free in the arguments", x.name))
            }
            Label::Lam => {
                let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
                let Judgement::Member { term: body, .. } = &c.conclusion else {
                    return Err("premise is not a membership".into());
                };
                let forbidden = Self::forbidden(ts);
                let ok = binder_candidates(u, [body]).into_iter().any(|x| !forbidden.contains(&x) && Term::lam(&x, body) == *u);
                ensure(ok, || "premise is not the body of the abstraction".into())
            }
            l => Err(format!("label {l} does not conclude a membership")),
        }
    }

    // --- argument ordering ---

    fn approx(&self, d: &Derivation, f: &Name, ts: &[Term], a: &Term, b: &Term) -> Check {
        let _ = f;
        match d.label {
            Label::BaseApprox => {
                let (g, gs) = Self::spine(a)?;
                let gty = self.ctx.sig.type_of(&g).ok_or_else(|| format!("undeclared `{g}`"))?;
                let (doms, out) = gty.flatten();
                ensure(doms.len() == gs.len(), || "left side is not fully applied".into())?;
                ensure(self.ty(b)? == Type::Base(out.clone()), || "right side does not have the output sort".into())?;
                let acc = acc_of_type(gty);
                let (h, bs) = b.spine();
                let ok = (0..=bs.len()).any(|k| {
                    let prefix = Term::apps(h.clone(), bs[..k].iter().map(|x| (*x).clone()));
                    let i = gs.iter().position(|x| *x == prefix);
                    i.is_some_and(|i| acc.contains(&(i + 1))) && bs[k..].iter().all(|bj| Self::member_child(d, bj).is_some())
                });
                ensure(ok, || "right side is not an accessible argument applied to closure members".into())
            }
            Label::LamApprox => {
                let [c] = d.children.as_slice() else { return Err("expected one premise".into()) };
                let Judgement::Approx { left: body, right: bx, .. } = &c.conclusion else {
                    return Err("premise is not an approximation".into());
                };
                let Node::App(b2, x) = bx.node() else { return Err("premise right side is not an application".into()) };
                let x = x.as_var().ok_or("premise applies to a non-variable")?;
                ensure(b2 == b, || "premise applies a different term".into())?;
                ensure(!b.has_free_var(x) && !Self::forbidden(ts).contains(x), || format!("`{}` is not fresh", x.name))?;
                ensure(Term::lam(x, body) == *a, || "premise is not the body of the abstraction".into())
            }
            Label::RedApprox | Label::TransApprox => {
                let [first, second] = d.children.as_slice() else { return Err("expected two premises".into()) };
                let Judgement::Approx { left, right: c, .. } = &first.conclusion else {
                    return Err("first premise is not an approximation".into());
                };
                ensure(left == a, || "first premise has a different left side".into())?;
                let ok = match (d.label, &second.conclusion) {
                    (Label::RedApprox, Judgement::Steps(p)) => p.first() == Some(c) && p.last() == Some(b),
                    (Label::TransApprox, Judgement::Approx { left, right, .. }) => left == c && right == b,
                    _ => false,
                };
                ensure(ok, || "second premise does not connect to the right side".into())
            }
            l => Err(format!("label {l} does not conclude an approximation")),
        }
    }
}

/// Variables `x` that could make `t = λx.body`: the free variables of the
/// bodies with the binder type, or a variable that occurs nowhere.
fn binder_candidates<'t>(t: &Term, bodies: impl IntoIterator<Item = &'t Term>) -> Vec<Var> {
    let Some(b) = t.binder() else { return Vec::new() };
    let mut taken = t.names();
    let mut out = Vec::new();
    for body in bodies {
        taken.extend(body.names());
        out.extend(body.free_vars().into_iter().filter(|v| v.ty == b.ty));
    }
    let fresh = crate::term::fresh_name("z", |n| taken.contains(n));
    out.push(Var { name: fresh, ty: b.ty.clone() });
    out
}

fn abstracts_pair(t: &Term, u: &Term, a: &Term, b: &Term) -> bool {
    let (Some(bt), Some(bu)) = (t.binder(), u.binder()) else { return false };
    bt.ty == bu.ty
        && binder_candidates(t, [a, b])
            .into_iter()
            .any(|x| !t.has_free_var(&x) && !u.has_free_var(&x) && Term::lam(&x, a) == *t && Term::lam(&x, b) == *u)
}

/// `t = C[a]` and `u = C[b]` for one context `C`.
fn in_context(t: &Term, u: &Term, a: &Term, b: &Term) -> bool {
    if t == a && u == b {
        return true;
    }
    match (t.node(), u.node()) {
        (Node::App(f1, x1), Node::App(f2, x2)) => {
            (f1 == f2 && in_context(x1, x2, a, b)) || (x1 == x2 && in_context(f1, f2, a, b))
        }
        (Node::Lam(..), Node::Lam(..)) => {
            let (Some(bt), Some(bu)) = (t.binder(), u.binder()) else { return false };
            if bt.ty != bu.ty {
                return false;
            }
            binder_candidates(t, [a, b]).into_iter().any(|x| {
                if t.has_free_var(&x) || u.has_free_var(&x) {
                    return false;
                }
                let xt = Term::var(x);
                match (t.instantiate_body(&xt), u.instantiate_body(&xt)) {
                    (Some(tb), Some(ub)) => in_context(&tb, &ub, a, b),
                    _ => false,
                }
            })
        }
        _ => false,
    }
}
