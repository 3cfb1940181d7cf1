//! Exhaustive enumeration of small well-typed terms, for oracles and
//! exhaustive property checks.
//!
//! Application arguments may in principle have any type, which would make
//! the set of terms of a given size infinite (`(\x:T. 0) a` for ever larger
//! `T`). Argument and binder types are therefore drawn from a finite type
//! universe: all arrow suffixes and argument types of the symbol types, the
//! pool variable types, and the requested type.

use std::collections::{BTreeSet, HashMap};

use crate::signature::Signature;
use crate::term::{Binder, Term, Var};
use crate::types::{name, Type};

pub fn type_universe(sig: &Signature, vars: &[Var], target: &Type) -> BTreeSet<Type> {
    fn add(ty: &Type, out: &mut BTreeSet<Type>) {
        if !out.insert(ty.clone()) {
            return;
        }
        if let Some((d, c)) = ty.as_arrow() {
            add(d, out);
            add(c, out);
        }
    }
    let mut out = BTreeSet::new();
    for (_, d) in sig.symbols() {
        add(&d.ty, &mut out);
    }
    for v in vars {
        add(&v.ty, &mut out);
    }
    add(target, &mut out);
    out
}

/// Every well-typed term of type `ty` with at most `max_size` nodes, once
/// each up to alpha, ordered by size. Free variables come from `vars`.
pub fn enumerate_terms(sig: &Signature, ty: &Type, max_size: usize, vars: &[Var]) -> Vec<Term> {
    let mut e = Enumerator::new(sig, vars, type_universe(sig, vars, ty));
    (1..=max_size).flat_map(|n| e.exact(ty, n, &[])).collect()
}

/// Every well-typed term of any universe type with at most `max_size` nodes.
pub fn enumerate_all(sig: &Signature, max_size: usize, vars: &[Var], extra_types: &[Type]) -> Vec<Term> {
    let mut universe = BTreeSet::new();
    for t in extra_types {
        universe.extend(type_universe(sig, vars, t));
    }
    if extra_types.is_empty() {
        if let Some(v) = vars.first() {
            universe.extend(type_universe(sig, vars, &v.ty));
        } else if let Some((_, d)) = sig.symbols().next() {
            universe.extend(type_universe(sig, vars, &d.ty));
        }
    }
    let mut e = Enumerator::new(sig, vars, universe.clone());
    let mut out = Vec::new();
    for n in 1..=max_size {
        for ty in &universe {
            out.extend(e.exact(ty, n, &[]));
        }
    }
    out
}

struct Enumerator<'a> {
    sig: &'a Signature,
    vars: &'a [Var],
    universe: BTreeSet<Type>,
    memo: HashMap<(Type, usize, Vec<Type>), Vec<Term>>,
}

impl<'a> Enumerator<'a> {
    fn new(sig: &'a Signature, vars: &'a [Var], universe: BTreeSet<Type>) -> Self {
        Enumerator { sig, vars, universe, memo: HashMap::new() }
    }

    /// Terms of exactly `n` nodes whose loose bound indices refer to `ctx`
    /// (innermost binder last).
    fn exact(&mut self, ty: &Type, n: usize, ctx: &[Type]) -> Vec<Term> {
        let key = (ty.clone(), n, ctx.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            for (i, bt) in ctx.iter().rev().enumerate() {
                if bt == ty {
                    out.push(Term::bound(i as u32));
                }
            }
            for v in self.vars {
                if v.ty == *ty {
                    out.push(Term::var(v.clone()));
                }
            }
            for (f, d) in self.sig.symbols() {
                if d.ty == *ty {
                    out.push(Term::sym_name(f.clone()));
                }
            }
        } else {
            if let Some((dom, cod)) = ty.as_arrow() {
                let mut inner = ctx.to_vec();
                inner.push(dom.clone());
                for body in self.exact(cod, n - 1, &inner) {
                    out.push(Term::raw_lam(Binder { hint: name("x"), ty: dom.clone() }, body));
                }
            }
            if n >= 3 {
                let universe: Vec<Type> = self.universe.iter().cloned().collect();
                for x in universe {
                    let fty = Type::arrow(x.clone(), ty.clone());
                    for k in 1..=n - 2 {
                        let funs = self.exact(&fty, k, ctx);
                        if funs.is_empty() {
                            continue;
                        }
                        let args = self.exact(&x, n - 1 - k, ctx);
                        for f in &funs {
                            for a in &args {
                                out.push(Term::app(f.clone(), a.clone()));
                            }
                        }
                    }
                }
            }
        }
        self.memo.insert(key, out.clone());
        out
    }
}

/// Lambda-free, fully applied terms of base sort `sort` with at most
/// `max_size` nodes, over first-order symbols and base-typed variables.
pub fn enumerate_first_order(sig: &Signature, sort: &str, max_size: usize, vars: &[Var]) -> Vec<Term> {
    let mut memo: HashMap<(String, usize), Vec<Term>> = HashMap::new();
    (1..=max_size).flat_map(|n| fo_exact(sig, vars, sort, n, &mut memo)).collect()
}

fn fo_exact(sig: &Signature, vars: &[Var], sort: &str, n: usize, memo: &mut HashMap<(String, usize), Vec<Term>>) -> Vec<Term> {
    if let Some(v) = memo.get(&(sort.to_string(), n)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.extend(vars.iter().filter(|v| matches!(&v.ty, Type::Base(b) if b.as_ref() == sort)).map(|v| Term::var(v.clone())));
    }
    for (f, d) in sig.symbols() {
        let (args, out_sort) = d.ty.flatten();
        if out_sort.as_ref() != sort || !args.iter().all(|a| a.is_base()) {
            continue;
        }
        // f a1 .. ak has 1 + k (App nodes) + sum |ai| nodes.
        let k = args.len();
        if n < 1 + k {
            continue;
        }
        let sorts: Vec<String> = args.iter().map(|a| a.output_sort().to_string()).collect();
        for split in compositions(n - 1 - k, k) {
            let mut partial: Vec<Vec<Term>> = vec![Vec::new()];
            for (s, &m) in sorts.iter().zip(&split) {
                let cands = fo_exact(sig, vars, s, m, memo);
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        cands.iter().map(move |c| {
                            let mut q = p.clone();
                            q.push(c.clone());
                            q
                        })
                    })
                    .collect();
            }
            for argv in partial {
                out.push(Term::apps(Term::sym_name(f.clone()), argv));
            }
        }
    }
    memo.insert((sort.to_string(), n), out.clone());
    out
}

/// Ordered ways to write `total` as a sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
