//! Lexicographic and multiset extensions, and the status comparison that
//! combines them with the precedence.

use crate::error::PrecedenceError;
use crate::precedence::{PrecCmp, Status, SymbolOrder};

/// Dershowitz–Manna multiset extension of `rel`.
///
/// `n` must be `m - x + y` for some non-empty `x ⊆ m` and `y` whose every
/// element is `rel`-below some element of `x`. Element identity is `==`.
/// Exact for arbitrary `rel` (no transitivity assumed): the only freedom is
/// which common elements are kept unchanged, and those are enumerated.
pub fn mul_ext<T: PartialEq>(rel: impl Fn(&T, &T) -> bool, m: &[T], n: &[T]) -> bool {
    // Pair every element of n with an equal, still unpaired element of m.
    let mut m_used = vec![false; m.len()];
    let mut common: Vec<(usize, usize)> = Vec::new();
    for (j, b) in n.iter().enumerate() {
        if let Some(i) = (0..m.len()).find(|&i| !m_used[i] && m[i] == *b) {
            m_used[i] = true;
            common.push((i, j));
        }
    }
    // Keeping k of the common pairs: x = m minus kept, y = n minus kept.
    let c = common.len();
    let limit: u64 = 1 << c.min(20);
    for mask in 0..limit {
        let mut in_x = vec![true; m.len()];
        let mut in_y = vec![true; n.len()];
        for (bit, &(i, j)) in common.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                in_x[i] = false;
                in_y[j] = false;
            }
        }
        if !in_x.iter().any(|&b| b) {
            continue;
        }
        let ok =
            n.iter().enumerate().filter(|(j, _)| in_y[*j]).all(|(_, b)| m.iter().enumerate().any(|(i, a)| in_x[i] && rel(a, b)));
        if ok {
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexDirection {
    LeftToRight,
    RightToLeft,
}

/// Lexicographic extension scanning in `dir`. The first differing pair
/// decides; if the shorter list is exhausted with all pairs equal, the longer
/// list is greater.
pub fn lex_ext<T: PartialEq>(rel: impl Fn(&T, &T) -> bool, t: &[T], u: &[T], dir: LexDirection) -> bool {
    let k = t.len().min(u.len());
    for step in 0..k {
        let (a, b) = match dir {
            LexDirection::LeftToRight => (&t[step], &u[step]),
            LexDirection::RightToLeft => (&t[t.len() - 1 - step], &u[u.len() - 1 - step]),
        };
        if a != b {
            return rel(a, b);
        }
    }
    t.len() > u.len()
}

/// Extension of `rel` selected by a status.
pub fn status_ext<T: PartialEq>(status: Status, rel: impl Fn(&T, &T) -> bool, t: &[T], u: &[T]) -> bool {
    match status {
        Status::LexLeftRight => lex_ext(rel, t, u, LexDirection::LeftToRight),
        Status::LexRightLeft => lex_ext(rel, t, u, LexDirection::RightToLeft),
        Status::Mul => mul_ext(rel, t, u),
    }
}

/// `(f, t) >stat (g, u)`: `f >F g`, or `f ~F g` and `t` is above `u` in the
/// status extension of `rel`.
///
/// `rel` is used as given; callers pass a transitive relation or accept the
/// extension of a non-transitive one as an under-approximation of the
/// extension of its transitive closure.
pub fn stat_cmp<T: PartialEq>(
    order: &SymbolOrder,
    rel: impl Fn(&T, &T) -> bool,
    f: &str,
    t: &[T],
    g: &str,
    u: &[T],
) -> Result<bool, PrecedenceError> {
    Ok(match order.cmp(f, g)? {
        PrecCmp::Greater => true,
        PrecCmp::Equivalent => status_ext(order.status(f), rel, t, u),
        PrecCmp::NotGreaterOrEquiv => false,
    })
}
