//! Precedence (a quasi-ordering on symbols) and argument statuses.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PrecedenceError;
use crate::types::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Status {
    #[serde(rename = "lex-lr")]
    #[default]
    LexLeftRight,
    #[serde(rename = "lex-rl")]
    LexRightLeft,
    #[serde(rename = "mul")]
    Mul,
}

impl Status {
    pub const ALL: [Status; 3] = [Status::LexLeftRight, Status::LexRightLeft, Status::Mul];

    pub fn is_lex(self) -> bool {
        !matches!(self, Status::Mul)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::LexLeftRight => "lex-lr",
            Status::LexRightLeft => "lex-rl",
            Status::Mul => "mul",
        })
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex-lr" | "lex" => Ok(Status::LexLeftRight),
            "lex-rl" => Ok(Status::LexRightLeft),
            "mul" => Ok(Status::Mul),
            other => Err(format!("unknown status `{other}` (expected lex-lr, lex-rl or mul)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecCmp {
    Greater,
    Equivalent,
    NotGreaterOrEquiv,
}

/// Equivalence classes of symbols plus a strict relation between classes.
///
/// Built from `f > g` and `f ~ g` declarations; the transitive closure of
/// the strict part is computed eagerly, so a cyclic input shows up as a class
/// above itself (reported by [`Precedence::validate`]).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Precedence {
    class_of: BTreeMap<Name, usize>,
    classes: Vec<BTreeSet<Name>>,
    edges: BTreeSet<(usize, usize)>,
    above: Vec<Vec<bool>>,
    greater_decls: Vec<(Name, Name)>,
    equiv_decls: Vec<(Name, Name)>,
}

impl Precedence {
    /// Every symbol in its own class, no strict edges.
    pub fn empty(symbols: impl IntoIterator<Item = Name>) -> Self {
        Self::from_decls(symbols, [], []).expect("no declarations")
    }

    pub fn from_decls(
        symbols: impl IntoIterator<Item = Name>,
        greater: impl IntoIterator<Item = (Name, Name)>,
        equiv: impl IntoIterator<Item = (Name, Name)>,
    ) -> Result<Self, PrecedenceError> {
        let symbols: BTreeSet<Name> = symbols.into_iter().collect();
        let greater: Vec<(Name, Name)> = greater.into_iter().collect();
        let equiv: Vec<(Name, Name)> = equiv.into_iter().collect();
        for (f, g) in greater.iter().chain(equiv.iter()) {
            for s in [f, g] {
                if !symbols.contains(s) {
                    return Err(PrecedenceError::UndeclaredSymbol(s.clone()));
                }
            }
        }

        let index: BTreeMap<&Name, usize> = symbols.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut parent: Vec<usize> = (0..symbols.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            let mut j = i;
            while parent[j] != r {
                let next = parent[j];
                parent[j] = r;
                j = next;
            }
            r
        }
        for (f, g) in &equiv {
            let (a, b) = (find(&mut parent, index[f]), find(&mut parent, index[g]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }

        let mut root_to_class = BTreeMap::new();
        let mut classes: Vec<BTreeSet<Name>> = Vec::new();
        let mut class_of = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            let r = find(&mut parent, i);
            let c = *root_to_class.entry(r).or_insert_with(|| {
                classes.push(BTreeSet::new());
                classes.len() - 1
            });
            classes[c].insert(s.clone());
            class_of.insert(s.clone(), c);
        }

        let edges: BTreeSet<(usize, usize)> = greater.iter().map(|(f, g)| (class_of[f], class_of[g])).collect();
        let n = classes.len();
        let mut above = vec![vec![false; n]; n];
        for &(a, b) in &edges {
            above[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if above[i][k] {
                    let via = above[k].clone();
                    for (cell, reach) in above[i].iter_mut().zip(via) {
                        *cell |= reach;
                    }
                }
            }
        }
        Ok(Precedence { class_of, classes, edges, above, greater_decls: greater, equiv_decls: equiv })
    }

    /// Linear quasi-order given as classes from greatest to smallest.
    pub fn from_layers(symbols: impl IntoIterator<Item = Name>, layers: &[Vec<Name>]) -> Result<Self, PrecedenceError> {
        let mut greater = Vec::new();
        let mut equiv = Vec::new();
        for layer in layers {
            for w in layer.windows(2) {
                equiv.push((w[0].clone(), w[1].clone()));
            }
        }
        for w in layers.windows(2) {
            if let (Some(f), Some(g)) = (w[0].first(), w[1].first()) {
                greater.push((f.clone(), g.clone()));
            }
        }
        Self::from_decls(symbols, greater, equiv)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Name> {
        self.class_of.keys()
    }

    pub fn contains(&self, f: &str) -> bool {
        self.class_of.contains_key(f)
    }

    pub fn classes(&self) -> &[BTreeSet<Name>] {
        &self.classes
    }

    pub fn class_members(&self, f: &str) -> Option<&BTreeSet<Name>> {
        self.class_of.get(f).map(|&c| &self.classes[c])
    }

    pub fn greater_decls(&self) -> &[(Name, Name)] {
        &self.greater_decls
    }

    pub fn equiv_decls(&self) -> &[(Name, Name)] {
        &self.equiv_decls
    }

    pub fn cmp(&self, f: &str, g: &str) -> Result<PrecCmp, PrecedenceError> {
        let cf = *self.class_of.get(f).ok_or_else(|| PrecedenceError::UndeclaredSymbol(f.into()))?;
        let cg = *self.class_of.get(g).ok_or_else(|| PrecedenceError::UndeclaredSymbol(g.into()))?;
        Ok(if cf == cg {
            PrecCmp::Equivalent
        } else if self.above[cf][cg] {
            PrecCmp::Greater
        } else {
            PrecCmp::NotGreaterOrEquiv
        })
    }

    pub fn is_greater(&self, f: &str, g: &str) -> bool {
        matches!(self.cmp(f, g), Ok(PrecCmp::Greater))
    }

    pub fn is_equiv(&self, f: &str, g: &str) -> bool {
        matches!(self.cmp(f, g), Ok(PrecCmp::Equivalent))
    }

    /// A cycle through the strict part, as symbol representatives, if any.
    pub fn find_cycle(&self) -> Option<Vec<Name>> {
        let start = (0..self.classes.len()).find(|&c| self.above[c][c])?;
        // BFS over declared edges from `start` back to `start`.
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = BTreeSet::from([start]);
        let mut last = None;
        'bfs: while let Some(c) = queue.pop_front() {
            for &(a, b) in self.edges.range((c, 0)..(c + 1, 0)) {
                debug_assert_eq!(a, c);
                if b == start {
                    last = Some(c);
                    break 'bfs;
                }
                if seen.insert(b) {
                    prev.insert(b, c);
                    queue.push_back(b);
                }
            }
        }
        let mut path = vec![last?];
        while let Some(&p) = prev.get(path.last().unwrap()) {
            path.push(p);
        }
        path.reverse();
        path.push(start);
        Some(path.into_iter().map(|c| self.classes[c].iter().next().unwrap().clone()).collect())
    }

    /// Acyclicity of the strict part and constant statuses on classes.
    pub fn validate(&self, statuses: &Statuses) -> Result<(), Vec<PrecedenceError>> {
        let mut diags = Vec::new();
        if let Some(cycle) = self.find_cycle() {
            diags.push(PrecedenceError::Cycle(cycle));
        }
        for class in &self.classes {
            let st: BTreeSet<Status> = class.iter().map(|f| statuses.get(f)).collect();
            if st.len() > 1 {
                diags.push(PrecedenceError::StatusMismatch(class.iter().cloned().collect()));
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }
}

/// Per-symbol statuses; undeclared symbols default to `lex-lr`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Statuses(BTreeMap<Name, Status>);

impl Statuses {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, f: Name, s: Status) {
        self.0.insert(f, s);
    }

    pub fn with(mut self, f: &str, s: Status) -> Self {
        self.0.insert(f.into(), s);
        self
    }

    pub fn get(&self, f: &str) -> Status {
        self.0.get(f).copied().unwrap_or_default()
    }

    pub fn declared(&self, f: &str) -> Option<Status> {
        self.0.get(f).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Status)> {
        self.0.iter()
    }
}

/// Precedence together with statuses: everything the orderings are
/// parameterised by.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolOrder {
    pub prec: Precedence,
    pub statuses: Statuses,
}

impl SymbolOrder {
    pub fn new(prec: Precedence, statuses: Statuses) -> Result<Self, Vec<PrecedenceError>> {
        prec.validate(&statuses)?;
        Ok(SymbolOrder { prec, statuses })
    }

    pub fn status(&self, f: &str) -> Status {
        self.statuses.get(f)
    }

    pub fn cmp(&self, f: &str, g: &str) -> Result<PrecCmp, PrecedenceError> {
        self.prec.cmp(f, g)
    }
}
