//! The relation `→βR` seen by the higher-order closure: either the rules of
//! a system, or a previously computed ordering used as a rewrite relation.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::derivation::{Derivation, Judgement, Label};
use crate::rewrite::{reduction_paths, ReductionBudget, Rule, StepKind};
use crate::signature::Signature;
use crate::term::Term;

/// Bounded access to a reduction relation `→`.
pub trait RuleView {
    /// Terms reachable from `t` in one or more steps that can be found by
    /// forward search, each with its evidence (a `Steps` derivation).
    fn forward(&self, t: &Term, max_size: usize) -> Vec<(Term, Derivation)>;

    /// Evidence for `t →⁺ u`.
    fn reaches(&self, t: &Term, u: &Term, max_size: usize) -> Option<Derivation>;
}

pub(crate) fn steps(path: Vec<Term>, children: Vec<Derivation>) -> Derivation {
    Derivation::new(Label::Red, Judgement::Steps(path), children)
}

/// `→βR` for an explicit rule set, explored breadth-first.
/// Terms reachable from a start term, each with its reduction path.
type Reachable = BTreeMap<Term, Vec<Term>>;

pub struct TrsView<'a> {
    sig: &'a Signature,
    rules: &'a [Rule],
    max_steps: usize,
    cache: RefCell<HashMap<(Term, usize), Rc<Reachable>>>,
}

impl<'a> TrsView<'a> {
    pub fn new(sig: &'a Signature, rules: &'a [Rule], max_steps: usize) -> Self {
        TrsView { sig, rules, max_steps, cache: RefCell::default() }
    }

    fn paths(&self, t: &Term, max_size: usize) -> Rc<BTreeMap<Term, Vec<Term>>> {
        let key = (t.clone(), max_size);
        if let Some(p) = self.cache.borrow().get(&key) {
            return p.clone();
        }
        let rb = ReductionBudget { max_steps: self.max_steps, max_term_size: max_size };
        let p = Rc::new(reduction_paths(self.sig, self.rules, t, rb, StepKind::Both));
        self.cache.borrow_mut().insert(key, p.clone());
        p
    }
}

impl RuleView for TrsView<'_> {
    fn forward(&self, t: &Term, max_size: usize) -> Vec<(Term, Derivation)> {
        self.paths(t, max_size).iter().map(|(r, p)| (r.clone(), steps(p.clone(), Vec::new()))).collect()
    }

    fn reaches(&self, t: &Term, u: &Term, max_size: usize) -> Option<Derivation> {
        self.paths(t, max_size.max(u.size())).get(u).map(|p| steps(p.clone(), Vec::new()))
    }
}
