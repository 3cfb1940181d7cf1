//! Text and JSON rendering of check reports, and re-validation of JSON
//! reports and derivations.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::check::{rule_goal, validation_context, CheckReport, Criterion, Format};
use crate::derivation::{Derivation, Judgement, OrderKind};
use crate::precedence::{Precedence, Status, Statuses, SymbolOrder};
use crate::rewrite::Trs;
use crate::syntax::term_to_string_in;
use crate::types::{name, Name, Type};
use crate::validate::validate_derivation;

pub const REPORT_VERSION: u64 = 1;

/// Precedence edges between class representatives and the statuses of all
/// symbols, in a stable order.
fn order_parts(order: &SymbolOrder) -> (Vec<String>, BTreeMap<String, String>) {
    let prec = &order.prec;
    let mut decls = Vec::new();
    let reps: Vec<&Name> = prec.classes().iter().filter_map(|c| c.iter().next()).collect();
    for class in prec.classes() {
        let mut it = class.iter();
        if let Some(first) = it.next() {
            decls.extend(it.map(|g| format!("{first} ~ {g}")));
        }
    }
    for f in &reps {
        for g in &reps {
            if prec.is_greater(f, g) {
                decls.push(format!("{f} > {g}"));
            }
        }
    }
    let statuses = prec.symbols().map(|f| (f.to_string(), order.status(f).to_string())).collect();
    (decls, statuses)
}

pub fn emit_report(report: &CheckReport, format: Format, declared: &BTreeMap<Name, Type>) -> String {
    match format {
        Format::Json => emit_json(report, declared),
        Format::Text => emit_text(report, declared),
    }
}

pub fn report_json(report: &CheckReport, declared: &BTreeMap<Name, Type>) -> Value {
    let p = |t| term_to_string_in(t, declared);
    let rules: Vec<Value> = report
        .rules
        .iter()
        .map(|r| {
            json!({
                "lhs": p(r.rule.lhs()),
                "rhs": p(r.rule.rhs()),
                "oriented": r.oriented,
                "derivation": r.derivation.as_ref().map(|d| d.to_json(declared)),
                "reason": r.reason,
            })
        })
        .collect();
    let mut summary = json!({ "oriented": report.oriented(), "total": report.total() });
    if let Some(order) = &report.searched {
        let (decls, statuses) = order_parts(order);
        summary["precedence"] = json!(decls);
        summary["statuses"] = json!(statuses);
    }
    json!({
        "version": REPORT_VERSION,
        "criterion": report.criterion.as_str(),
        "rules": rules,
        "summary": summary,
    })
}

fn emit_json(report: &CheckReport, declared: &BTreeMap<Name, Type>) -> String {
    let mut s = serde_json::to_string_pretty(&report_json(report, declared)).expect("json values serialize");
    s.push('\n');
    s
}

fn emit_text(report: &CheckReport, declared: &BTreeMap<Name, Type>) -> String {
    let p = |t| term_to_string_in(t, declared);
    let b = report.budget;
    let mut out = format!(
        "criterion: {} (depth {}, red-steps {}, size-slack {})\n",
        report.criterion, b.max_search_depth, b.max_red_steps, b.max_term_size_slack
    );
    if let Some(order) = &report.searched {
        let (decls, statuses) = order_parts(order);
        out += &format!("searched precedence: {}\n", if decls.is_empty() { "(none)".to_string() } else { decls.join(", ") });
        let st: Vec<String> = statuses.iter().map(|(f, s)| format!("{f}:{s}")).collect();
        out += &format!("statuses: {}\n", st.join(" "));
    }
    for (i, r) in report.rules.iter().enumerate() {
        let verdict =
            if r.oriented { "oriented".to_string() } else { format!("NOT oriented ({})", r.reason.as_deref().unwrap_or("")) };
        out += &format!("\nrule {}: {} -> {}\n  {verdict}\n", i + 1, p(r.rule.lhs()), p(r.rule.rhs()));
        if let Some(d) = &r.derivation {
            for line in d.render_tree(declared).lines() {
                out += &format!("    {line}\n");
            }
        }
    }
    out += &format!("\n{}/{} rules oriented\n", report.oriented(), report.total());
    out
}

/// The symbol order recorded in a JSON report, if it came from a search.
fn searched_order(trs: &Trs, summary: &Value) -> Result<Option<SymbolOrder>, String> {
    let Some(decls) = summary.get("precedence") else { return Ok(None) };
    let decls = decls.as_array().ok_or("`precedence` must be an array")?;
    let mut greater = Vec::new();
    let mut equiv = Vec::new();
    for d in decls {
        let text = d.as_str().ok_or("precedence entries must be strings")?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        match parts.as_slice() {
            [f, ">", g] => greater.push((name(f), name(g))),
            [f, "~", g] => equiv.push((name(f), name(g))),
            _ => return Err(format!("bad precedence entry `{text}`")),
        }
    }
    let prec = Precedence::from_decls(trs.sig().symbol_names().cloned(), greater, equiv).map_err(|e| e.to_string())?;
    let mut statuses = Statuses::new();
    if let Some(Value::Object(m)) = summary.get("statuses") {
        for (f, s) in m {
            let s: Status = s.as_str().ok_or("statuses must be strings")?.parse()?;
            statuses.set(name(f), s);
        }
    }
    SymbolOrder::new(prec, statuses).map(Some).map_err(|errs| errs[0].to_string())
}

fn criterion_of(d: &Derivation) -> Criterion {
    match &d.conclusion {
        Judgement::Gt { order: OrderKind::Rpo, .. } => Criterion::Rpo,
        Judgement::Gt { order: OrderKind::Rco, .. } => Criterion::Rco,
        Judgement::Gt { order: OrderKind::Horpo, .. } => Criterion::Horpo,
        _ => Criterion::Horco,
    }
}

/// Re-checks every derivation in `text`, which is either a JSON report or a
/// single derivation node. One entry per derivation: `Err` carries the
/// validator's complaint. Malformed input is an outer `Err`.
pub fn revalidate(trs: &Trs, text: &str) -> Result<Vec<Result<(), String>>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let declared = trs.vars();
    if v.get("rule").is_some() {
        let d = Derivation::from_json(&v, trs.sig(), declared)?;
        let ctx = validation_context(trs, criterion_of(&d));
        return Ok(vec![validate_derivation(&d, &ctx).map_err(|e| e.to_string())]);
    }
    if v.get("version").and_then(Value::as_u64) != Some(REPORT_VERSION) {
        return Err(format!("expected a report with version {REPORT_VERSION} or a derivation node"));
    }
    let criterion: Criterion = v.get("criterion").and_then(Value::as_str).ok_or("report without criterion")?.parse()?;
    let sys = match searched_order(trs, v.get("summary").unwrap_or(&Value::Null))? {
        Some(order) => trs.with_order(order),
        None => trs.clone(),
    };
    let ctx = validation_context(&sys, criterion);
    let rules = v.get("rules").and_then(Value::as_array).ok_or("report without rules")?;
    let mut out = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        let Some(node) = r.get("derivation").filter(|n| !n.is_null()) else { continue };
        let d = Derivation::from_json(node, sys.sig(), declared)?;
        let goal = sys.rules().get(i).and_then(|rule| rule_goal(criterion, rule));
        let res = if goal.as_ref() != Some(&d.conclusion) {
            Err(format!("derivation {} does not conclude rule {}", i + 1, i + 1))
        } else {
            validate_derivation(&d, &ctx).map_err(|e| e.to_string())
        };
        out.push(res);
    }
    Ok(out)
}
