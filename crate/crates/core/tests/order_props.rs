mod common;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use proptest::prelude::*;

use common::{mul_split_oracle, multisets};
use horco::extension::{lex_ext, mul_ext, stat_cmp, LexDirection};
use horco::{name, Name, Precedence, Status, Statuses, SymbolOrder};

fn divides(a: u8, b: u8) -> bool {
    a != b && a.is_multiple_of(b)
}

#[test]
fn multiset_extension_matches_split_oracle() {
    let ms = multisets(&[1, 2, 3, 4], 4);
    assert_eq!(ms.len(), 70);
    for m in &ms {
        for n in &ms {
            assert_eq!(mul_ext(|a: &u8, b: &u8| a > b, m, n), mul_split_oracle(|a, b| a > b, m, n), "{m:?} vs {n:?}");
            // A partial order: strict divisibility.
            assert_eq!(mul_ext(|a: &u8, b: &u8| divides(*a, *b), m, n), mul_split_oracle(divides, m, n), "{m:?} / {n:?}");
        }
    }
}

fn tuple() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 0..4)
}

type Ext<'a> = dyn Fn(&[u8], &[u8]) -> bool + 'a;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn extensions_are_strict_orders(a in tuple(), b in tuple(), c in tuple()) {
        let gt = |x: &u8, y: &u8| x > y;
        let exts: [&Ext<'_>; 3] = [
            &|x, y| mul_ext(gt, x, y),
            &|x, y| lex_ext(gt, x, y, LexDirection::LeftToRight),
            &|x, y| lex_ext(gt, x, y, LexDirection::RightToLeft),
        ];
        for ext in exts {
            prop_assert!(!ext(&a, &a));
            if ext(&a, &b) && ext(&b, &c) {
                prop_assert!(ext(&a, &c), "{:?} > {:?} > {:?}", a, b, c);
            }
        }
    }
}

/// The status comparison over a finite universe has no cycle, so no
/// descending chain is longer than the universe.
#[test]
fn status_comparison_is_well_founded_on_finite_universes() {
    let syms = [name("f"), name("g")];
    let layered = |layers: &[&[&str]]| {
        let layers: Vec<Vec<Name>> = layers.iter().map(|l| l.iter().map(|s| name(s)).collect()).collect();
        Precedence::from_layers(syms.iter().cloned(), &layers).unwrap()
    };
    let tuples: Vec<Vec<u8>> =
        (0..=2).flat_map(|k| itertools::Itertools::multi_cartesian_product((0..k).map(|_| 0u8..3))).collect();
    let tuples: Vec<Vec<u8>> = std::iter::once(Vec::new()).chain(tuples.into_iter().filter(|t| !t.is_empty())).collect();
    for prec in [layered(&[&["f"], &["g"]]), layered(&[&["f", "g"]])] {
        for st in [Status::Mul, Status::LexLeftRight, Status::LexRightLeft] {
            let order = SymbolOrder::new(prec.clone(), Statuses::new().with("f", st).with("g", st)).unwrap();
            let universe: Vec<(&str, &Vec<u8>)> = ["f", "g"].iter().flat_map(|f| tuples.iter().map(move |t| (*f, t))).collect();
            let mut graph = DiGraph::<usize, ()>::new();
            let nodes: Vec<_> = (0..universe.len()).map(|i| graph.add_node(i)).collect();
            for (i, (f, t)) in universe.iter().enumerate() {
                for (j, (g, u)) in universe.iter().enumerate() {
                    if stat_cmp(&order, |a: &u8, b: &u8| a > b, f, t, g, u).unwrap() {
                        graph.add_edge(nodes[i], nodes[j], ());
                    }
                }
            }
            assert!(!petgraph::algo::is_cyclic_directed(&graph), "{st:?}");
        }
    }
}

fn decl() -> impl Strategy<Value = (usize, usize, bool)> {
    (0usize..5, 0usize..5, prop::bool::weighted(0.2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn precedence_validation_accepts_exactly_acyclic_declarations(decls in prop::collection::vec(decl(), 0..7)) {
        let syms: Vec<Name> = (0..5).map(|i| name(&format!("f{i}"))).collect();
        let greater: Vec<(Name, Name)> = decls.iter().filter(|d| !d.2).map(|&(a, b, _)| (syms[a].clone(), syms[b].clone())).collect();
        let equiv: Vec<(Name, Name)> = decls.iter().filter(|d| d.2).map(|&(a, b, _)| (syms[a].clone(), syms[b].clone())).collect();
        let prec = Precedence::from_decls(syms.iter().cloned(), greater, equiv).unwrap();
        // Oracle: a strict edge inside a strongly connected component of
        // (strict edges + both directions of every equivalence) is a cycle.
        let mut g = DiGraph::<usize, ()>::new();
        let n: Vec<_> = (0..5).map(|i| g.add_node(i)).collect();
        for &(a, b, eq) in &decls {
            g.add_edge(n[a], n[b], ());
            if eq {
                g.add_edge(n[b], n[a], ());
            }
        }
        let comp: Vec<usize> = {
            let mut c = vec![0; 5];
            for (k, scc) in tarjan_scc(&g).into_iter().enumerate() {
                for v in scc {
                    c[g[v]] = k;
                }
            }
            c
        };
        let cyclic = decls.iter().any(|&(a, b, eq)| !eq && comp[a] == comp[b]);
        prop_assert_eq!(prec.validate(&Statuses::new()).is_ok(), !cyclic);
        prop_assert_eq!(prec.find_cycle().is_some(), cyclic);
    }
}
