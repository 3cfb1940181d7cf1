//! Checking that every rule of a system is oriented by a chosen ordering,
//! with an optional exhaustive search over precedences and statuses.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::derivation::{Derivation, Judgement, OrderKind};
use crate::error::{CheckError, OrderError};
use crate::fo::{rco_gt, rpo_gt};
use crate::ho::{horco_chain_gt, horpo_gt, orient_rule};
use crate::precedence::{Precedence, Status, Statuses, SymbolOrder};
use crate::rewrite::{Rule, Trs};
use crate::term::Term;
use crate::types::Name;
use crate::validate::{validate_derivation, ValidationContext};

/// Precedence search refuses systems with more defined symbols than this.
pub const SEARCH_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Rpo,
    Rco,
    Horpo,
    Horco,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [Criterion::Rpo, Criterion::Rco, Criterion::Horpo, Criterion::Horco];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Rpo => "rpo",
            Criterion::Rco => "rco",
            Criterion::Horpo => "horpo",
            Criterion::Horco => "horco",
        }
    }

    pub fn is_first_order(self) -> bool {
        matches!(self, Criterion::Rpo | Criterion::Rco)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown criterion `{s}` (expected rpo, rco, horpo or horco)"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text or json)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub criterion: Criterion,
    pub budget: Budget,
    pub search_precedence: bool,
    pub format: Format,
}

impl CheckConfig {
    pub fn new(criterion: Criterion) -> Self {
        CheckConfig { criterion, budget: Budget::default(), search_precedence: false, format: Format::Text }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleReport {
    pub rule: Rule,
    pub oriented: bool,
    pub derivation: Option<Derivation>,
    pub reason: Option<String>,
}

/// Outcome of checking a whole system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub criterion: Criterion,
    pub budget: Budget,
    pub rules: Vec<RuleReport>,
    /// The symbol order that was used, when it came from a search.
    pub searched: Option<SymbolOrder>,
}

impl CheckReport {
    pub fn oriented(&self) -> usize {
        self.rules.iter().filter(|r| r.oriented).count()
    }

    pub fn total(&self) -> usize {
        self.rules.len()
    }

    pub fn all_oriented(&self) -> bool {
        self.oriented() == self.total()
    }

    /// 0 when every rule is oriented, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_oriented() {
            0
        } else {
            1
        }
    }
}

/// The judgement a derivation for `rule` must conclude.
pub fn rule_goal(criterion: Criterion, rule: &Rule) -> Option<Judgement> {
    let (l, r) = (rule.lhs(), rule.rhs());
    Some(match criterion {
        Criterion::Rpo => Judgement::gt(OrderKind::Rpo, l, r),
        Criterion::Rco => Judgement::gt(OrderKind::Rco, l, r),
        Criterion::Horpo => Judgement::gt(OrderKind::Horpo, l, r),
        Criterion::Horco => {
            let (f, ts) = l.symbol_spine()?;
            Judgement::Member { head: f.clone(), args: ts.into_iter().cloned().collect(), term: r.clone() }
        }
    })
}

pub fn validation_context<'a>(trs: &'a Trs, criterion: Criterion) -> ValidationContext<'a> {
    ValidationContext { sig: trs.sig(), order: trs.order(), rules: trs.rules(), first_order: criterion.is_first_order() }
}

fn require_first_order(trs: &Trs, criterion: Criterion) -> Result<(), CheckError> {
    if criterion.is_first_order() && !trs.is_first_order() {
        return Err(CheckError::NotFirstOrder(criterion.as_str()));
    }
    Ok(())
}

/// A derivation orienting `rule` under the system's symbol order.
pub fn orient(trs: &Trs, criterion: Criterion, budget: Budget, rule: &Rule) -> Result<Option<Derivation>, OrderError> {
    let (sig, order, l, r) = (trs.sig(), trs.order(), rule.lhs(), rule.rhs());
    match criterion {
        Criterion::Rpo => rpo_gt(sig, order, l, r),
        Criterion::Rco => rco_gt(sig, order, l, r),
        Criterion::Horpo => horpo_gt(sig, order, l, r),
        Criterion::Horco => orient_rule(sig, order, trs.rules(), rule, budget),
    }
}

fn check_rule(trs: &Trs, criterion: Criterion, budget: Budget, rule: &Rule) -> Result<RuleReport, CheckError> {
    let not = |reason: String| RuleReport { rule: rule.clone(), oriented: false, derivation: None, reason: Some(reason) };
    let Some(d) = orient(trs, criterion, budget, rule)? else {
        let reason = match criterion {
            Criterion::Horco => "no closure derivation found within the search budget",
            _ => "not oriented by the ordering",
        };
        return Ok(not(reason.to_string()));
    };
    if Some(&d.conclusion) != rule_goal(criterion, rule).as_ref() {
        return Ok(not("derivation does not conclude the rule".to_string()));
    }
    if let Err(e) = validate_derivation(&d, &validation_context(trs, criterion)) {
        return Ok(not(format!("derivation rejected by the validator: {e}")));
    }
    Ok(RuleReport { rule: rule.clone(), oriented: true, derivation: Some(d), reason: None })
}

fn check_rules(trs: &Trs, criterion: Criterion, budget: Budget) -> Result<Vec<RuleReport>, CheckError> {
    std::thread::scope(|s| {
        let handles: Vec<_> = trs.rules().iter().map(|rule| s.spawn(move || check_rule(trs, criterion, budget, rule))).collect();
        handles.into_iter().map(|h| h.join().expect("rule check panicked")).collect()
    })
}

/// Checks every rule, searching for a symbol order first when configured.
pub fn run_check(trs: &Trs, config: &CheckConfig) -> Result<CheckReport, CheckError> {
    config.budget.validate()?;
    require_first_order(trs, config.criterion)?;
    if config.search_precedence {
        if let Some(report) = search_precedence(trs, config)? {
            return Ok(report);
        }
    }
    let rules = check_rules(trs, config.criterion, config.budget)?;
    Ok(CheckReport { criterion: config.criterion, budget: config.budget, rules, searched: None })
}

/// Tries linear quasi-orders over the defined symbols (each above every
/// other symbol, user declarations kept) with every status assignment that
/// agrees with the declared statuses. Returns the first report orienting
/// every rule.
pub fn search_precedence(trs: &Trs, config: &CheckConfig) -> Result<Option<CheckReport>, CheckError> {
    config.budget.validate()?;
    require_first_order(trs, config.criterion)?;
    let defined: Vec<Name> = trs.defined_symbols().into_iter().collect();
    if defined.len() > SEARCH_CAP {
        return Err(CheckError::SearchCap { cap: SEARCH_CAP, found: defined.len() });
    }
    let others: Vec<Name> = trs.sig().symbol_names().filter(|s| !defined.contains(s)).cloned().collect();
    let prec = &trs.order().prec;
    for layers in ordered_partitions(&defined) {
        let mut greater: Vec<(Name, Name)> = prec.greater_decls().to_vec();
        let mut equiv: Vec<(Name, Name)> = prec.equiv_decls().to_vec();
        for w in layers.windows(2) {
            greater.push((w[0][0].clone(), w[1][0].clone()));
        }
        for layer in &layers {
            equiv.extend(layer.windows(2).map(|w| (w[0].clone(), w[1].clone())));
        }
        if let Some(last) = layers.last() {
            greater.extend(others.iter().map(|c| (last[0].clone(), c.clone())));
        }
        let Ok(candidate) = Precedence::from_decls(trs.sig().symbol_names().cloned(), greater, equiv) else { continue };
        if candidate.find_cycle().is_some() {
            continue;
        }
        for statuses in status_assignments(trs, &layers) {
            let Ok(order) = SymbolOrder::new(candidate.clone(), statuses) else { continue };
            let sys = trs.with_order(order.clone());
            let rules = check_rules(&sys, config.criterion, config.budget)?;
            if rules.iter().all(|r| r.oriented) {
                return Ok(Some(CheckReport {
                    criterion: config.criterion,
                    budget: config.budget,
                    rules,
                    searched: Some(order),
                }));
            }
        }
    }
    Ok(None)
}

/// Ordered set partitions of `xs` (classes listed greatest first), in a
/// fixed order: fewer classes first.
fn ordered_partitions(xs: &[Name]) -> Vec<Vec<Vec<Name>>> {
    fn rec(xs: &[Name]) -> Vec<Vec<Vec<Name>>> {
        let Some((first, rest)) = xs.split_first() else { return vec![Vec::new()] };
        let mut out = Vec::new();
        for p in rec(rest) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].insert(0, first.clone());
                out.push(q);
            }
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, vec![first.clone()]);
                out.push(q);
            }
        }
        out
    }
    let mut all = rec(xs);
    all.sort_by_key(|p| p.len());
    all
}

/// Statuses tried for an unpinned class, in order.
const STATUS_ORDER: [Status; 3] = [Status::LexRightLeft, Status::LexLeftRight, Status::Mul];

fn status_assignments(trs: &Trs, layers: &[Vec<Name>]) -> Vec<Statuses> {
    let declared = |f: &Name| trs.sig().decl(f).and_then(|d| d.status);
    let mut out = vec![trs.order().statuses.clone()];
    for class in layers {
        let pinned: BTreeSet<Status> = class.iter().filter_map(declared).collect();
        let options: Vec<Status> = match pinned.len() {
            0 if class.iter().all(|f| trs.sig().arity(f).unwrap_or(0) <= 1) => vec![Status::LexLeftRight],
            0 => STATUS_ORDER.to_vec(),
            1 => pinned.into_iter().collect(),
            _ => return Vec::new(),
        };
        out = out
            .into_iter()
            .flat_map(|s| {
                options.iter().map(move |st| {
                    let mut s = s.clone();
                    for f in class {
                        s.set(f.clone(), *st);
                    }
                    s
                })
            })
            .collect();
    }
    out
}

/// Decides `t > u` for one pair; under `horco` a chain of up to `chain`
/// steps is allowed.
pub fn compare(
    trs: &Trs,
    criterion: Criterion,
    t: &Term,
    u: &Term,
    budget: Budget,
    chain: usize,
) -> Result<Option<Vec<Derivation>>, CheckError> {
    budget.validate()?;
    let (sig, order) = (trs.sig(), trs.order());
    let one = |d: Option<Derivation>| d.map(|d| vec![d]);
    Ok(match criterion {
        Criterion::Rpo => one(rpo_gt(sig, order, t, u)?),
        Criterion::Rco => one(rco_gt(sig, order, t, u)?),
        Criterion::Horpo => one(horpo_gt(sig, order, t, u)?),
        Criterion::Horco => horco_chain_gt(sig, order, t, u, chain, budget)?,
    })
}
