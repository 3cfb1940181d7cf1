//! Acceptance suite: one pass/fail line per criterion. Runs without the test
//! harness so the lines are always printed; exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use horco::check::{orient, run_check, CheckConfig, Criterion};
use horco::enumerate::enumerate_all;
use horco::extension::mul_ext;
use horco::fo::{rco_fixpoint_oracle, rco_gt, rpo_gt, FixpointOptions, RedVariant};
use horco::ho::{horco_chain_gt, whorco_gt, Horpo};
use horco::syntax::parse_trs;
use horco::validate::{validate_derivation, ValidationContext};
use horco::{name, Budget, Derivation, Precedence, Rule, Signature, Status, Statuses, Subst, SymbolOrder, Term, Trs, Type, Var};

use common::{b, fo_orders, fo_sig, fo_universe, mul_split_oracle, multisets};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn bb() -> Type {
    Type::arrow(b(), b())
}

/// `{a : B, f : B -> B, h : B -> B -> B, g : (B -> B) -> B}`.
fn ho_sig() -> Signature {
    Signature::new().with("a", b()).with("f", bb()).with("h", Type::arrows([b(), b()], b())).with("g", Type::arrow(bb(), b()))
}

fn ho_vars() -> Vec<Var> {
    vec![Var::new("x", b()), Var::new("y", b()), Var::new("F", bb())]
}

fn linear_order(syms: &[&str], ranking: &[&str], statuses: Statuses) -> SymbolOrder {
    let layers: Vec<Vec<_>> = ranking.iter().map(|s| vec![name(s)]).collect();
    let prec = Precedence::from_layers(syms.iter().map(|s| name(s)), &layers).unwrap();
    SymbolOrder::new(prec, statuses).unwrap()
}

fn empty_ctx<'a>(sig: &'a Signature, order: &'a SymbolOrder) -> ValidationContext<'a> {
    ValidationContext { sig, order, rules: &[], first_order: false }
}

fn criterion_1() -> Outcome {
    let cases = [
        ("differentiation", include_str!("../corpus/differentiation.trs"), true, true),
        ("process algebra", include_str!("../corpus/process_algebra.trs"), false, true),
        ("lists of functions", include_str!("../corpus/lists_of_functions.trs"), false, true),
    ];
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, src, want_horpo, want_horco) in cases {
        let trs = parse_trs(src).unwrap();
        let got = |c| run_check(&trs, &CheckConfig::new(c)).unwrap().all_oriented();
        let (horpo, horco) = (got(Criterion::Horpo), got(Criterion::Horco));
        let matches = horpo == want_horpo && horco == want_horco;
        ok &= matches;
        parts.push(format!(
            "{label}: horpo {horpo}/{want_horpo} horco {horco}/{want_horco}{}",
            if matches { "" } else { " MISMATCH" }
        ));
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(10);
    outcome(ok && fast, format!("{} (got/expected); {} (limit 10s)", parts.join("; "), secs(elapsed)))
}

fn criterion_2() -> Outcome {
    let (sig, u) = (fo_sig(), fo_universe(5));
    let start = Instant::now();
    let (mut pairs, mut disagree) = (0usize, 0usize);
    let orders = fo_orders();
    for order in &orders {
        let fix = rco_fixpoint_oracle(&sig, order, &u, Budget::default(), FixpointOptions::default());
        for t in &u {
            for v in &u {
                pairs += 1;
                let rpo = rpo_gt(&sig, order, t, v).unwrap().is_some();
                let agree = if t.head_symbol().is_some() {
                    let rco = rco_gt(&sig, order, t, v).unwrap().is_some();
                    rpo == rco && rpo == fix.contains(&(t.clone(), v.clone()))
                } else {
                    !rpo && !fix.iter().any(|(l, _)| l == t)
                };
                if !agree {
                    disagree += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        disagree == 0 && elapsed < Duration::from_secs(300),
        format!(
            "{} terms, {} orders, {pairs} pairs, {disagree} disagreements; {} (limit 300s)",
            u.len(),
            orders.len(),
            secs(elapsed)
        ),
    )
}

fn criterion_3() -> Outcome {
    let sig = ho_sig();
    let syms = ["a", "f", "h", "g"];
    let u = enumerate_all(&sig, 4, &ho_vars(), &[b(), bb()]);
    let typed: Vec<(Term, Type)> = u.iter().map(|t| (t.clone(), t.type_of(&sig).unwrap())).collect();
    let start = Instant::now();
    let (mut orders, mut positives, mut escalated, mut misses, mut trips, mut invalid) = (0, 0, 0, 0, 0, 0);
    for ranking in syms.iter().copied().permutations(4) {
        for st in [Status::LexLeftRight, Status::Mul] {
            orders += 1;
            let order = linear_order(&syms, &ranking, Statuses::new().with("h", st));
            let horpo = Horpo::new(&sig, &order);
            let ctx = empty_ctx(&sig, &order);
            for (t, tt) in &typed {
                for (v, vt) in &typed {
                    if tt != vt || horpo.gt(t, v).unwrap().is_none() {
                        continue;
                    }
                    positives += 1;
                    let mut chain = horco_chain_gt(&sig, &order, t, v, 3, Budget::default()).unwrap();
                    if chain.is_none() {
                        escalated += 1;
                        chain = horco_chain_gt(&sig, &order, t, v, 3, Budget::default().scaled(2)).unwrap();
                    }
                    match chain {
                        Some(ds) => invalid += ds.iter().filter(|d| validate_derivation(d, &ctx).is_err()).count(),
                        None => misses += 1,
                    }
                }
            }
            trips += horpo.case6_trips();
        }
    }
    outcome(
        misses == 0 && invalid == 0 && trips == 0,
        format!(
            "{} terms, {orders} orders, {positives} horpo pairs, {escalated} needed 2x budget, {misses} misses, \
             {invalid} invalid chain steps, {trips} case-6 trips; {}",
            u.len(),
            secs(start.elapsed())
        ),
    )
}

fn criterion_4() -> Outcome {
    let trs = parse_trs(include_str!("../corpus/minus_div.trs")).unwrap();
    let rule = trs.rules().iter().find(|r| r.rhs().head_symbol().is_some_and(|h| h.as_ref() == "s")).unwrap();
    let rpo = rpo_gt(trs.sig(), trs.order(), rule.lhs(), rule.rhs()).unwrap().is_some();
    let horco_1 = orient(&trs, Criterion::Horco, Budget::default(), rule).unwrap().is_some();
    let horco_2 = orient(&trs, Criterion::Horco, Budget::default().scaled(2), rule).unwrap().is_some();
    outcome(
        !rpo && !horco_1 && !horco_2,
        format!("div rule oriented by rpo: {rpo}, horco 1x: {horco_1}, horco 2x: {horco_2} (all expected false)"),
    )
}

const FUZZ_TYPES: usize = 5;

fn fuzz_type(i: usize) -> Type {
    match i {
        0 => b(),
        1 => bb(),
        2 => Type::arrows([b(), b()], b()),
        3 => Type::arrow(bb(), b()),
        _ => Type::arrows([bb(), b()], b()),
    }
}

/// A random system: a constant `a`, up to three more symbols, a random
/// precedence and statuses, and one or two well-formed rules.
fn random_system(rng: &mut ChaCha8Rng) -> Option<Trs> {
    let mut sig = Signature::new().with("a", b());
    let extra = rng.gen_range(1..=3);
    let mut syms = vec!["a".to_string()];
    for k in 0..extra {
        let f = format!("f{k}");
        sig = sig.with(&f, fuzz_type(rng.gen_range(1..FUZZ_TYPES)));
        syms.push(f);
    }
    for f in &syms {
        let st = *[Status::LexLeftRight, Status::LexRightLeft, Status::Mul].choose(rng).unwrap();
        sig = sig.with_status(f, st);
    }
    let vars = ho_vars();
    let pool = enumerate_all(&sig, 4, &vars, &[b(), bb()]);
    let lhss: Vec<&Term> = pool.iter().filter(|t| t.head_symbol().is_some() && t.size() >= 2).collect();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let l = *lhss.choose(rng)?;
        let ty = l.type_of(&sig).ok()?;
        let fv = l.free_vars();
        let rhss: Vec<&Term> =
            pool.iter().filter(|r| *r != l && r.free_vars().is_subset(&fv) && r.type_of(&sig).ok() == Some(ty.clone())).collect();
        let r = *rhss.choose(rng)?;
        rules.push(Rule::new(l.clone(), r.clone(), &sig).ok()?);
    }
    let mut shuffled = syms.clone();
    shuffled.shuffle(rng);
    let nlayers = rng.gen_range(1..=shuffled.len());
    let mut layers = vec![Vec::new(); nlayers];
    for (i, f) in shuffled.iter().enumerate() {
        let k = if i < nlayers { i } else { rng.gen_range(0..nlayers) };
        layers[k].push(name(f));
    }
    let prec = Precedence::from_layers(syms.iter().map(|s| name(s)), &layers).ok()?;
    let declared: BTreeMap<_, _> = vars.iter().map(|v| (v.name.clone(), v.ty.clone())).collect();
    Trs::new(sig, declared, rules, prec).ok()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let (mut systems, mut derivations, mut invalid, mut trips) = (0usize, 0usize, 0usize, 0usize);
    let mut failures = Vec::new();
    while systems < 1000 {
        let Some(trs) = random_system(&mut rng) else { continue };
        systems += 1;
        let (sig, order) = (trs.sig(), trs.order());
        let mut emitted: Vec<(Derivation, ValidationContext)> = Vec::new();
        let fo = trs.is_first_order();
        for rule in trs.rules() {
            for c in [Criterion::Rpo, Criterion::Rco, Criterion::Horpo, Criterion::Horco] {
                if c.is_first_order() && !fo {
                    continue;
                }
                if let Some(d) = orient(&trs, c, Budget::default(), rule).unwrap() {
                    let ctx = ValidationContext { first_order: c.is_first_order(), ..empty_ctx(sig, order) };
                    emitted.push((d, ValidationContext { rules: trs.rules(), ..ctx }));
                }
            }
        }
        let horpo = Horpo::new(sig, order);
        let pool = enumerate_all(sig, 3, &ho_vars(), &[b(), bb()]);
        for _ in 0..4 {
            let t = pool.choose(&mut rng).unwrap();
            let ty = t.type_of(sig).unwrap();
            let same: Vec<&Term> = pool.iter().filter(|u| u.type_of(sig).ok() == Some(ty.clone())).collect();
            let u = *same.choose(&mut rng).unwrap();
            if let Some(d) = horpo.gt(t, u).unwrap() {
                emitted.push((d, empty_ctx(sig, order)));
            }
            if t.head_symbol().is_some() {
                if let Some(d) = whorco_gt(sig, order, t, u, Budget::default()).unwrap() {
                    emitted.push((d, empty_ctx(sig, order)));
                }
            }
        }
        trips += horpo.case6_trips();
        for (d, ctx) in &emitted {
            derivations += 1;
            if let Err(e) = validate_derivation(d, ctx) {
                invalid += 1;
                failures.push(e.to_string());
            }
        }
    }
    let mut detail = format!(
        "{systems} systems, {derivations} derivations, {invalid} invalid, {trips} case-6 trips; {}",
        secs(start.elapsed())
    );
    if let Some(f) = failures.first() {
        detail += &format!("; first failure: {f}");
    }
    outcome(invalid == 0 && trips == 0, detail)
}

fn criterion_6() -> Outcome {
    let ms = multisets(&[0, 1, 2, 3], 4);
    let mut mismatches = 0usize;
    let mut pairs = 0usize;
    let total = |a: u8, c: u8| a > c;
    let divides = |a: u8, c: u8| a != c && (a + 1).is_multiple_of(c + 1);
    for m in &ms {
        for n in &ms {
            for rel in [&total as &dyn Fn(u8, u8) -> bool, &divides] {
                pairs += 1;
                if mul_ext(|x: &u8, y: &u8| rel(*x, *y), m, n) != mul_split_oracle(rel, m, n) {
                    mismatches += 1;
                }
            }
        }
    }
    let (sig, u) = (fo_sig(), fo_universe(5));
    let mut differing = 0usize;
    let orders = fo_orders();
    for order in &orders {
        let transitive = FixpointOptions { variant: RedVariant::Transitive, ..FixpointOptions::default() };
        let transitive = rco_fixpoint_oracle(&sig, order, &u, Budget::default(), transitive);
        let single = FixpointOptions { variant: RedVariant::SingleStep, ..FixpointOptions::default() };
        if rco_fixpoint_oracle(&sig, order, &u, Budget::default(), single) != transitive {
            differing += 1;
        }
    }
    outcome(
        mismatches == 0 && differing == 0,
        format!(
            "{} multisets, {pairs} comparisons, {mismatches} mul_ext mismatches; {differing}/{} orders with differing red-variant fixpoints",
            ms.len(),
            orders.len()
        ),
    )
}

/// Closure properties of rco on the first-order universe; returns (checks, violations).
fn rco_properties(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (sig, u) = (fo_sig(), fo_universe(5));
    let small: Vec<Term> = u.iter().filter(|t| t.size() <= 3).cloned().collect();
    let (x, y) = (Var::new("x", b()), Var::new("y", b()));
    let ground: Vec<Term> = fo_universe(3).into_iter().filter(|t| t.free_vars().is_empty()).collect();
    let (mut checks, mut bad) = (0usize, 0usize);
    let mut check = |ok: bool| {
        checks += 1;
        if !ok {
            bad += 1;
        }
    };
    for order in fo_orders() {
        let gt = |t: &Term, v: &Term| t.head_symbol().is_some() && rco_gt(&sig, &order, t, v).unwrap().is_some();
        let rel: BTreeSet<(usize, usize)> =
            (0..u.len()).cartesian_product(0..u.len()).filter(|&(i, j)| gt(&u[i], &u[j])).collect();
        for &(i, j) in &rel {
            for k in 0..u.len() {
                if rel.contains(&(j, k)) {
                    check(rel.contains(&(i, k)));
                }
            }
        }
        for t in u.iter().filter(|t| t.head_symbol().is_some()) {
            for (pos, s) in t.positions() {
                if !pos.is_empty() {
                    check(gt(t, &s));
                }
            }
        }
        for &(i, j) in &rel {
            for _ in 0..4 {
                let vals = [small.choose(rng).unwrap().clone(), ground.choose(rng).unwrap().clone()];
                let sigma = Subst::from_pairs([(x.clone(), vals[0].clone()), (y.clone(), vals[1].clone())]);
                check(gt(&u[i].substitute(&sigma), &u[j].substitute(&sigma)));
            }
            for c in &small {
                let wrap = |t: &Term| {
                    [
                        Term::app(Term::sym("s"), t.clone()),
                        Term::apps(Term::sym("m"), [t.clone(), c.clone()]),
                        Term::apps(Term::sym("m"), [c.clone(), t.clone()]),
                    ]
                };
                for (ct, cu) in wrap(&u[i]).into_iter().zip(wrap(&u[j])) {
                    check(gt(&ct, &cu));
                }
            }
        }
    }
    (checks, bad)
}

#[derive(Default)]
struct Instances {
    direct: usize,
    escalated: usize,
    exhausted: usize,
    falsified: usize,
}

impl Instances {
    fn instance(&mut self, sig: &Signature, order: &SymbolOrder, t: &Term, u: &Term) {
        if t.head_symbol().is_none() || t == u {
            self.falsified += 1;
            return;
        }
        let found = match whorco_gt(sig, order, t, u, Budget::default()).unwrap() {
            Some(d) => {
                self.direct += 1;
                Some(d)
            }
            None => whorco_gt(sig, order, t, u, Budget::default().scaled(2)).unwrap().inspect(|_| self.escalated += 1),
        };
        match found {
            Some(d) if validate_derivation(&d, &empty_ctx(sig, order)).is_err() => self.falsified += 1,
            Some(_) => {}
            None => self.exhausted += 1,
        }
    }

    fn total(&self) -> usize {
        self.direct + self.escalated + self.exhausted + self.falsified
    }
}

/// Closure properties of whorco over the higher-order signature.
fn whorco_properties(rng: &mut ChaCha8Rng) -> BTreeMap<&'static str, Instances> {
    let sig = ho_sig();
    let order = linear_order(&["a", "f", "h", "g"], &["g", "h", "f", "a"], Statuses::new());
    let u = enumerate_all(&sig, 4, &[Var::new("x", b()), Var::new("F", bb())], &[b(), bb()]);
    let ty = |t: &Term| t.type_of(&sig).unwrap();
    let mut pairs = Vec::new();
    for t in u.iter().filter(|t| t.head_symbol().is_some()) {
        for v in u.iter().filter(|v| ty(v) == ty(t)) {
            if whorco_gt(&sig, &order, t, v, Budget::default()).unwrap().is_some() {
                pairs.push((t.clone(), v.clone()));
            }
        }
    }
    let mut out: BTreeMap<&'static str, Instances> = BTreeMap::new();
    let b_vals = [Term::sym("a"), Term::app(Term::sym("f"), Term::sym("a")), Term::var(Var::new("y", b()))];
    let z = Var::new("z", b());
    let f_vals = [
        Term::sym("f"),
        Term::app(Term::sym("h"), Term::sym("a")),
        Term::lam(&z, &Term::app(Term::sym("f"), Term::app(Term::sym("f"), Term::var(z.clone())))),
    ];
    let c = out.entry("1 substitution").or_default();
    for (t, v) in &pairs {
        for _ in 0..3 {
            let sigma = Subst::from_pairs([
                (Var::new("x", b()), b_vals.choose(rng).unwrap().clone()),
                (Var::new("F", bb()), f_vals.choose(rng).unwrap().clone()),
            ]);
            c.instance(&sig, &order, &t.substitute(&sigma), &v.substitute(&sigma));
        }
    }
    let e = out.entry("2 application").or_default();
    for (t, v) in pairs.iter().filter(|(t, _)| ty(t) == bb()) {
        for w in &b_vals {
            e.instance(&sig, &order, &Term::app(t.clone(), w.clone()), &Term::app(v.clone(), w.clone()));
        }
    }
    let f = out.entry("3 beta in context").or_default();
    let big = enumerate_all(&sig, 5, &[Var::new("x", b()), Var::new("F", bb())], &[b(), bb()]);
    for t in &big {
        for r in t.beta_reducts() {
            let two: Vec<Term> = r.beta_reducts().into_iter().collect();
            for v in std::iter::once(r.clone()).chain(two) {
                let contexts: Vec<(Term, Term)> = if ty(t) == b() {
                    vec![
                        (Term::app(Term::sym("f"), t.clone()), Term::app(Term::sym("f"), v.clone())),
                        (
                            Term::apps(Term::sym("h"), [t.clone(), Term::sym("a")]),
                            Term::apps(Term::sym("h"), [v.clone(), Term::sym("a")]),
                        ),
                        (
                            Term::apps(Term::sym("h"), [Term::sym("a"), t.clone()]),
                            Term::apps(Term::sym("h"), [Term::sym("a"), v.clone()]),
                        ),
                    ]
                } else if ty(t) == bb() {
                    vec![(Term::app(Term::sym("g"), t.clone()), Term::app(Term::sym("g"), v.clone()))]
                } else {
                    Vec::new()
                };
                for (ct, cv) in contexts {
                    f.instance(&sig, &order, &ct, &cv);
                }
            }
        }
    }
    let g = out.entry("4 chain collapse").or_default();
    let mut triples = Vec::new();
    for (t, v) in &pairs {
        for (v2, w) in &pairs {
            if v == v2 && t != w {
                triples.push((t, w));
            }
        }
    }
    triples.shuffle(rng);
    for (t, w) in triples.into_iter().take(400) {
        g.instance(&sig, &order, t, w);
    }
    out
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let (checks, violations) = rco_properties(&mut rng);
    let whorco = whorco_properties(&mut rng);
    let falsified: usize = whorco.values().map(|s| s.falsified).sum();
    let parts: Vec<String> = whorco
        .iter()
        .map(|(k, s)| {
            format!(
                "{k}: {} instances: {} direct, {} at 2x, {} exhausted, {} falsified",
                s.total(),
                s.direct,
                s.escalated,
                s.exhausted,
                s.falsified
            )
        })
        .collect();
    outcome(
        violations == 0 && falsified == 0,
        format!("rco: {checks} checks, {violations} violations; whorco: {}; {}", parts.join(", "), secs(start.elapsed())),
    )
}

type Entry = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Entry; 7] = [
        ("worked examples", criterion_1),
        ("rpo = rco", criterion_2),
        ("horpo within horco chains", criterion_3),
        ("negative controls", criterion_4),
        ("soundness fuzzing", criterion_5),
        ("extension oracles", criterion_6),
        ("closure properties", criterion_7),
    ];
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|(_, f)| s.spawn(f)).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| outcome(false, "panicked"))).collect()
    });
    let mut failed = 0;
    for (i, ((title, _), r)) in criteria.iter().zip(&results).enumerate() {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{verdict}] {title}: {}", i + 1, r.detail);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {}/{} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
