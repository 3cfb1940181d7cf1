//! Positive and negative positions in types, and accessible arguments.

use std::collections::BTreeSet;

use crate::error::SignatureError;
use crate::signature::Signature;
use crate::types::{Type, TypePosition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// Base-type positions of `ty` carrying polarity `pol`: a base occurrence is
/// positive when it sits to the left of an even number of arrows.
pub fn pos_signed(ty: &Type, pol: Polarity) -> BTreeSet<TypePosition> {
    let mut out = BTreeSet::new();
    signed_rec(ty, pol, &mut Vec::new(), &mut out);
    out
}

fn signed_rec(ty: &Type, pol: Polarity, prefix: &mut TypePosition, out: &mut BTreeSet<TypePosition>) {
    match ty {
        Type::Base(_) => {
            if pol == Polarity::Positive {
                out.insert(prefix.clone());
            }
        }
        Type::Arrow(d, c) => {
            prefix.push(1);
            signed_rec(d, pol.flip(), prefix, out);
            prefix.pop();
            prefix.push(2);
            signed_rec(c, pol, prefix, out);
            prefix.pop();
        }
    }
}

/// Positions of the occurrences of `sort` in `ty`.
pub fn pos_of_base(sort: &str, ty: &Type) -> BTreeSet<TypePosition> {
    ty.positions().into_iter().filter(|p| matches!(ty.subtype_at(p), Some(Type::Base(b)) if b.as_ref() == sort)).collect()
}

pub fn occurs_only_positively(sort: &str, ty: &Type) -> bool {
    let pos = pos_signed(ty, Polarity::Positive);
    pos_of_base(sort, ty).is_subset(&pos)
}

/// Accessible argument indices (1-based) of `f : T1 -> ... -> Tn -> B`:
/// those `i` where `B` occurs only positively in `Ti`.
pub fn acc(f: &str, sig: &Signature) -> Result<BTreeSet<usize>, SignatureError> {
    let ty = &sig.lookup(f)?.ty;
    Ok(acc_of_type(ty))
}

pub fn acc_of_type(ty: &Type) -> BTreeSet<usize> {
    let (args, out) = ty.flatten();
    args.iter().enumerate().filter(|(_, t)| occurs_only_positively(out, t)).map(|(i, _)| i + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Type {
        Type::base(s)
    }
    fn set(ps: &[&[u8]]) -> BTreeSet<TypePosition> {
        ps.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn signed_positions() {
        assert_eq!(pos_signed(&t("B"), Polarity::Positive), set(&[&[]]));
        assert_eq!(pos_signed(&t("B"), Polarity::Negative), set(&[]));
        let bc = Type::arrow(t("B"), t("C"));
        assert_eq!(pos_signed(&bc, Polarity::Positive), set(&[&[2]]));
        assert_eq!(pos_signed(&bc, Polarity::Negative), set(&[&[1]]));
        let bcd = Type::arrow(bc, t("D"));
        assert_eq!(pos_signed(&bcd, Polarity::Positive), set(&[&[1, 1], &[2]]));
    }

    #[test]
    fn base_occurrences() {
        assert_eq!(pos_of_base("P", &Type::arrow(t("D"), t("P"))), set(&[&[2]]));
        assert_eq!(pos_of_base("B", &t("C")), set(&[]));
        assert_eq!(pos_of_base("B", &Type::arrow(t("B"), t("B"))), set(&[&[1], &[2]]));
    }

    #[test]
    fn positivity() {
        assert!(occurs_only_positively("P", &Type::arrow(t("D"), t("P"))));
        assert!(occurs_only_positively("B", &t("B")));
        assert!(!occurs_only_positively("B", &Type::arrow(t("B"), t("B"))));
    }

    #[test]
    fn accessible_arguments() {
        let dp = Type::arrow(t("D"), t("P"));
        let rr = Type::arrow(t("R"), t("R"));
        let bb = Type::arrow(t("B"), t("B"));
        let sig = Signature::new()
            .with("sigma", Type::arrow(dp, t("P")))
            .with("times", Type::arrows([t("R"), t("R")], t("R")))
            .with("f", Type::arrow(bb.clone(), t("B")))
            .with("fcons", Type::arrows([bb, t("L")], t("L")))
            .with("D", Type::arrows([rr.clone(), t("R")], t("R")));
        let idx = |xs: &[usize]| xs.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(acc("sigma", &sig).unwrap(), idx(&[1]));
        assert_eq!(acc("times", &sig).unwrap(), idx(&[1, 2]));
        assert_eq!(acc("f", &sig).unwrap(), idx(&[]));
        assert_eq!(acc("fcons", &sig).unwrap(), idx(&[1, 2]));
        assert!(acc("nope", &sig).is_err());
    }
}
