//! Derivation trees: named inference-rule instances with their conclusions.
//!
//! Conclusions are printed in the term grammar with a few judgement forms:
//!
//! ```text
//! t >rpo u            t >rco u          t >horpo u      t >whorco u    t >horco u
//! u ∈ CC[f](t1, t2)   a ⊐[f](t1, t2) b  p0 => p1 => p2
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::Diagnostic;
use crate::signature::Signature;
use crate::syntax::{term_to_string_in, Parser, Scope, Tok};
use crate::term::Term;
use crate::types::{name, Name, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Arg,
    Decomp,
    Prec,
    Call,
    Red,
    App,
    Var,
    Lam,
    BaseApprox,
    LamApprox,
    RedApprox,
    TransApprox,
    Rpo(u8),
    Horpo(u8),
    Context,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Arg => "arg",
            Label::Decomp => "decomp",
            Label::Prec => "prec",
            Label::Call => "call",
            Label::Red => "red",
            Label::App => "app",
            Label::Var => "var",
            Label::Lam => "lam",
            Label::BaseApprox => "base⊐",
            Label::LamApprox => "lam⊐",
            Label::RedApprox => "red⊐",
            Label::TransApprox => "trans⊐",
            Label::Rpo(1) => "rpo1",
            Label::Rpo(2) => "rpo2",
            Label::Rpo(_) => "rpo3",
            Label::Horpo(1) => "horpo1",
            Label::Horpo(2) => "horpo2",
            Label::Horpo(3) => "horpo3",
            Label::Horpo(4) => "horpo4",
            Label::Horpo(5) => "horpo5",
            Label::Horpo(6) => "horpo6",
            Label::Horpo(_) => "horpo7",
            Label::Context => "context",
        }
    }

    pub const ALL: [Label; 23] = [
        Label::Arg,
        Label::Decomp,
        Label::Prec,
        Label::Call,
        Label::Red,
        Label::App,
        Label::Var,
        Label::Lam,
        Label::BaseApprox,
        Label::LamApprox,
        Label::RedApprox,
        Label::TransApprox,
        Label::Rpo(1),
        Label::Rpo(2),
        Label::Rpo(3),
        Label::Horpo(1),
        Label::Horpo(2),
        Label::Horpo(3),
        Label::Horpo(4),
        Label::Horpo(5),
        Label::Horpo(6),
        Label::Horpo(7),
        Label::Context,
    ];
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL.iter().find(|l| l.as_str() == s).copied().ok_or_else(|| format!("unknown rule label `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderKind {
    Rpo,
    Rco,
    Horpo,
    Whorco,
    Horco,
}

impl OrderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrderKind::Rpo => "rpo",
            OrderKind::Rco => "rco",
            OrderKind::Horpo => "horpo",
            OrderKind::Whorco => "whorco",
            OrderKind::Horco => "horco",
        }
    }
}

impl FromStr for OrderKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "rpo" => OrderKind::Rpo,
            "rco" => OrderKind::Rco,
            "horpo" => OrderKind::Horpo,
            "whorco" => OrderKind::Whorco,
            "horco" => OrderKind::Horco,
            other => return Err(format!("unknown ordering `{other}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Judgement {
    /// `left >order right`
    Gt { order: OrderKind, left: Term, right: Term },
    /// `term ∈ CC[head](args)`
    Member { head: Name, args: Vec<Term>, term: Term },
    /// `left ⊐[head](args) right`
    Approx { head: Name, args: Vec<Term>, left: Term, right: Term },
    /// A βR-reduction sequence, at least one step.
    Steps(Vec<Term>),
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|t| t.to_string()))
    }
}

impl Judgement {
    pub fn gt(order: OrderKind, left: &Term, right: &Term) -> Judgement {
        Judgement::Gt { order, left: left.clone(), right: right.clone() }
    }

    pub fn render(&self, declared: &BTreeMap<Name, Type>) -> String {
        self.render_with(|t| term_to_string_in(t, declared))
    }

    fn render_with(&self, p: impl Fn(&Term) -> String) -> String {
        let list = |ts: &[Term]| ts.iter().map(&p).collect::<Vec<_>>().join(", ");
        match self {
            Judgement::Gt { order, left, right } => format!("{} >{} {}", p(left), order.as_str(), p(right)),
            Judgement::Member { head, args, term } => format!("{} ∈ CC[{}]({})", p(term), head, list(args)),
            Judgement::Approx { head, args, left, right } => {
                format!("{} ⊐[{}]({}) {}", p(left), head, list(args), p(right))
            }
            Judgement::Steps(path) => path.iter().map(&p).collect::<Vec<_>>().join(" => "),
        }
    }

    pub fn parse(text: &str, sig: &Signature, declared: &BTreeMap<Name, Type>) -> Result<Judgement, Diagnostic> {
        let mut p = Parser::new(text, 1, Scope { sig, vars: declared })?;
        if p.peek() == Some(&Tok::Approx) || p.at_end() {
            return Err(p.err(p.col(), "expected a term"));
        }
        let first = p.term()?;
        let j = match p.peek() {
            Some(Tok::Gt) => {
                p.bump();
                let col = p.col();
                let kind = p.name()?;
                let order = kind.parse::<OrderKind>().map_err(|e| p.err(col, e))?;
                let right = p.term()?;
                Judgement::Gt { order, left: first, right }
            }
            Some(Tok::Elem) => {
                p.bump();
                let col = p.col();
                if p.name()? != "CC" {
                    return Err(p.err(col, "expected `CC`"));
                }
                let (head, args) = head_and_args(&mut p)?;
                Judgement::Member { head, args, term: first }
            }
            Some(Tok::Approx) => {
                p.bump();
                let (head, args) = head_and_args(&mut p)?;
                let right = p.term()?;
                Judgement::Approx { head, args, left: first, right }
            }
            Some(Tok::FatArrow) => {
                let mut path = vec![first];
                while p.peek() == Some(&Tok::FatArrow) {
                    p.bump();
                    path.push(p.term()?);
                }
                Judgement::Steps(path)
            }
            _ => return Err(p.err(p.col(), "expected `>`, `∈`, `⊐` or `=>`")),
        };
        p.finish()?;
        Ok(j)
    }
}

fn head_and_args(p: &mut Parser<'_>) -> Result<(Name, Vec<Term>), Diagnostic> {
    p.expect(Tok::LBracket)?;
    let head = name(&p.name()?);
    p.expect(Tok::RBracket)?;
    p.expect(Tok::LParen)?;
    let mut args = Vec::new();
    if p.peek() != Some(&Tok::RParen) {
        loop {
            args.push(p.term()?);
            if p.peek() == Some(&Tok::Comma) {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect(Tok::RParen)?;
    Ok((head, args))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub label: Label,
    pub conclusion: Judgement,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn new(label: Label, conclusion: Judgement, children: Vec<Derivation>) -> Self {
        Derivation { label, conclusion, children }
    }

    pub fn leaf(label: Label, conclusion: Judgement) -> Self {
        Self::new(label, conclusion, Vec::new())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut out = vec![self.label];
        for c in &self.children {
            out.extend(c.labels());
        }
        out
    }

    pub fn to_json(&self, declared: &BTreeMap<Name, Type>) -> Value {
        json!({
            "rule": self.label.as_str(),
            "conclusion": self.conclusion.render(declared),
            "children": self.children.iter().map(|c| c.to_json(declared)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, sig: &Signature, declared: &BTreeMap<Name, Type>) -> Result<Derivation, String> {
        let obj = v.as_object().ok_or("derivation node must be an object")?;
        let label: Label = obj.get("rule").and_then(Value::as_str).ok_or("node without `rule`")?.parse()?;
        let text = obj.get("conclusion").and_then(Value::as_str).ok_or("node without `conclusion`")?;
        let conclusion = Judgement::parse(text, sig, declared).map_err(|d| format!("in `{text}`: {}", d.message))?;
        let children = match obj.get("children") {
            None => Vec::new(),
            Some(Value::Array(cs)) => cs.iter().map(|c| Derivation::from_json(c, sig, declared)).collect::<Result<_, _>>()?,
            Some(_) => return Err("`children` must be an array".into()),
        };
        Ok(Derivation { label, conclusion, children })
    }

    /// Indented tree, one node per line.
    pub fn render_tree(&self, declared: &BTreeMap<Name, Type>) -> String {
        let mut out = String::new();
        self.tree_rec(declared, 0, &mut out);
        out
    }

    fn tree_rec(&self, declared: &BTreeMap<Name, Type>, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("({}) {}\n", self.label, self.conclusion.render(declared)));
        for c in &self.children {
            c.tree_rec(declared, depth + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Var;

    fn sig() -> Signature {
        let b = Type::base("B");
        Signature::new()
            .with("s", Type::arrow(b.clone(), b.clone()))
            .with("0", b.clone())
            .with("minus", Type::arrows([b.clone(), b.clone()], b))
    }

    #[test]
    fn labels_round_trip() {
        for l in Label::ALL {
            assert_eq!(l.as_str().parse::<Label>().unwrap(), l);
        }
        assert!("bogus".parse::<Label>().is_err());
    }

    #[test]
    fn judgements_round_trip() {
        let sg = sig();
        let b = Type::base("B");
        let declared: BTreeMap<Name, Type> = [(name("x"), b.clone())].into_iter().collect();
        let x = Term::var_named("x", b.clone());
        let z = Term::var(Var::new("z", b.clone()));
        let sx = Term::app(Term::sym("s"), x.clone());
        let js = vec![
            Judgement::gt(OrderKind::Rpo, &sx, &x),
            Judgement::Member { head: name("minus"), args: vec![sx.clone(), x.clone()], term: z.clone() },
            Judgement::Approx { head: name("minus"), args: vec![], left: sx.clone(), right: x.clone() },
            Judgement::Steps(vec![sx.clone(), x.clone(), z.clone()]),
        ];
        for j in js {
            let text = j.render(&declared);
            assert_eq!(Judgement::parse(&text, &sg, &declared).unwrap(), j, "{text}");
        }
        assert_eq!(Judgement::gt(OrderKind::Horco, &sx, &z).render(&declared), "s x >horco (z : B)");
    }

    #[test]
    fn json_round_trip() {
        let sg = sig();
        let b = Type::base("B");
        let declared: BTreeMap<Name, Type> = [(name("x"), b.clone())].into_iter().collect();
        let x = Term::var_named("x", b);
        let sx = Term::app(Term::sym("s"), x.clone());
        let d = Derivation::new(
            Label::Rpo(1),
            Judgement::gt(OrderKind::Rpo, &Term::app(Term::sym("s"), sx.clone()), &x),
            vec![Derivation::leaf(Label::Rpo(1), Judgement::gt(OrderKind::Rpo, &sx, &x))],
        );
        let v = d.to_json(&declared);
        assert_eq!(v["rule"], "rpo1");
        assert_eq!(Derivation::from_json(&v, &sg, &declared).unwrap(), d);
        assert_eq!(d.size(), 2);
    }
}
