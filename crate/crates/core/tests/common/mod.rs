//! Shared universes and independent oracles for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;

use horco::enumerate::enumerate_first_order;
use horco::{name, Precedence, Signature, Status, Statuses, SymbolOrder, Term, Type, Var};

pub fn b() -> Type {
    Type::base("B")
}

/// `{0 : B, s : B -> B, m : B -> B -> B}`.
pub fn fo_sig() -> Signature {
    Signature::new().with("0", b()).with("s", Type::arrow(b(), b())).with("m", Type::arrows([b(), b()], b()))
}

pub fn fo_vars() -> Vec<Var> {
    vec![Var::new("x", b()), Var::new("y", b())]
}

/// First-order terms of at most `size` nodes over [`fo_sig`] and two variables.
pub fn fo_universe(size: usize) -> Vec<Term> {
    enumerate_first_order(&fo_sig(), "B", size, &fo_vars())
}

/// Every two-class precedence over `0, s, m`, each under mul and lex-lr.
pub fn fo_orders() -> Vec<SymbolOrder> {
    let syms = ["0", "s", "m"];
    let mut out = Vec::new();
    for mask in 1..7u32 {
        let (hi, lo): (Vec<&str>, Vec<&str>) = syms.iter().enumerate().partition_map(|(i, s)| {
            if mask & (1 << i) != 0 {
                itertools::Either::Left(*s)
            } else {
                itertools::Either::Right(*s)
            }
        });
        let layers = vec![hi.iter().map(|s| name(s)).collect(), lo.iter().map(|s| name(s)).collect()];
        for st in [Status::Mul, Status::LexLeftRight] {
            let prec = Precedence::from_layers(syms.iter().map(|s| name(s)), &layers).unwrap();
            let statuses = syms.iter().fold(Statuses::new(), |acc, s| acc.with(s, st));
            out.push(SymbolOrder::new(prec, statuses).unwrap());
        }
    }
    out
}

/// Multisets (as sorted vectors) of at most `max_len` elements drawn from `elems`.
pub fn multisets(elems: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    (0..=max_len).flat_map(|k| elems.iter().copied().combinations_with_replacement(k)).collect()
}

fn counts(xs: &[u8]) -> BTreeMap<u8, usize> {
    xs.iter().copied().counts().into_iter().collect()
}

/// `m >mul n` by brute force over every split: some non-empty sub-multiset
/// `x` of `m` with `m - x ⊆ n` such that each element of `y = n - (m - x)`
/// lies below some element of `x`.
pub fn mul_split_oracle(rel: impl Fn(u8, u8) -> bool, m: &[u8], n: &[u8]) -> bool {
    let nc = counts(n);
    (0..m.len()).powerset().any(|removed| {
        if removed.is_empty() {
            return false;
        }
        let x: Vec<u8> = removed.iter().map(|&i| m[i]).collect();
        let kept: Vec<u8> = (0..m.len()).filter(|i| !removed.contains(i)).map(|i| m[i]).collect();
        let kc = counts(&kept);
        if kc.iter().any(|(e, c)| nc.get(e).copied().unwrap_or(0) < *c) {
            return false;
        }
        let y = nc.iter().flat_map(|(e, c)| std::iter::repeat_n(*e, c - kc.get(e).copied().unwrap_or(0)));
        y.into_iter().all(|b| x.iter().any(|&a| rel(a, b)))
    })
}
