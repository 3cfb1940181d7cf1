//! Textual syntax: term printing, and parsing of types, terms and system
//! files.
//!
//! ```text
//! sort   NAME+
//! symbol NAME : TYPE [status (lex-lr|lex-rl|mul)]
//! var    NAME : TYPE
//! prec   NAME (>|~) NAME
//! rule   TERM -> TERM
//! ```
//!
//! Terms are curried applications of names, `\x:T. body` abstractions, and
//! `(x : T)` for a variable given its type inline (used when printing
//! variables the surrounding file does not declare).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Diagnostic, PrecedenceError};
use crate::precedence::{Precedence, Status};
use crate::rewrite::{Rule, Trs};
use crate::signature::Signature;
use crate::term::{fresh_name, Node, Term, Var};
use crate::types::{name, Name, Type};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Fun,
    Arg,
}

/// Plain printing: every free variable by its name.
pub fn write_term(f: &mut impl fmt::Write, t: &Term) -> fmt::Result {
    Printer { declared: None }.write(f, t)
}

/// Printing against a set of declared variables: free variables that are
/// not declared with exactly their type are written `(x : T)`.
pub fn term_to_string_in(t: &Term, declared: &BTreeMap<Name, Type>) -> String {
    let mut s = String::new();
    Printer { declared: Some(declared) }.write(&mut s, t).expect("string write");
    s
}

struct Printer<'a> {
    declared: Option<&'a BTreeMap<Name, Type>>,
}

impl Printer<'_> {
    fn write(&self, f: &mut impl fmt::Write, t: &Term) -> fmt::Result {
        let taken = t.names();
        let mut stack = Vec::new();
        self.go(f, t, &taken, &mut stack, Ctx::Top)
    }

    fn go(&self, f: &mut impl fmt::Write, t: &Term, taken: &BTreeSet<Name>, stack: &mut Vec<Name>, ctx: Ctx) -> fmt::Result {
        match t.node() {
            Node::Var(v) => match self.declared {
                Some(d) if d.get(&v.name) != Some(&v.ty) => write!(f, "({} : {})", v.name, v.ty),
                _ => f.write_str(&v.name),
            },
            Node::Bound(i) => {
                let k = stack.len().checked_sub(1 + *i as usize);
                match k {
                    Some(k) => f.write_str(&stack[k]),
                    None => write!(f, "#{i}"),
                }
            }
            Node::Sym(s) => f.write_str(s),
            Node::App(g, a) => {
                if ctx == Ctx::Arg {
                    f.write_char('(')?;
                }
                self.go(f, g, taken, stack, Ctx::Fun)?;
                f.write_char(' ')?;
                self.go(f, a, taken, stack, Ctx::Arg)?;
                if ctx == Ctx::Arg {
                    f.write_char(')')?;
                }
                Ok(())
            }
            Node::Lam(b, body) => {
                let n = fresh_name(&b.hint, |c| taken.contains(c) || stack.iter().any(|s| s.as_ref() == c));
                if ctx != Ctx::Top {
                    f.write_char('(')?;
                }
                write!(f, "\\{}:{}. ", n, b.ty)?;
                stack.push(n);
                self.go(f, body, taken, stack, Ctx::Top)?;
                stack.pop();
                if ctx != Ctx::Top {
                    f.write_char(')')?;
                }
                Ok(())
            }
        }
    }
}

/// Prints a system in the file grammar.
pub fn write_trs(trs: &Trs) -> String {
    let mut out = String::new();
    let sig = trs.sig();
    if !sig.sorts().is_empty() {
        let sorts: Vec<&str> = sig.sorts().iter().map(|s| s.as_ref()).collect();
        let _ = writeln!(out, "sort {}", sorts.join(" "));
    }
    for (f, d) in sig.symbols() {
        let _ = write!(out, "symbol {f} : {}", d.ty);
        if let Some(st) = d.status {
            let _ = write!(out, " status {st}");
        }
        out.push('\n');
    }
    for (x, ty) in trs.vars() {
        let _ = writeln!(out, "var {x} : {ty}");
    }
    let prec = &trs.order().prec;
    for (f, g) in prec.equiv_decls() {
        let _ = writeln!(out, "prec {f} ~ {g}");
    }
    for (f, g) in prec.greater_decls() {
        let _ = writeln!(out, "prec {f} > {g}");
    }
    for r in trs.rules() {
        let _ = writeln!(out, "rule {} -> {}", term_to_string_in(r.lhs(), trs.vars()), term_to_string_in(r.rhs(), trs.vars()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Name(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Backslash,
    Colon,
    Dot,
    Comma,
    Arrow,
    FatArrow,
    Gt,
    Tilde,
    Elem,
    Approx,
    Turnstile,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Elem => f.write_str("`∈`"),
            Tok::Approx => f.write_str("`⊐`"),
            Tok::Turnstile => f.write_str("`|-`"),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokens of one line with their 1-based columns. `#` starts a comment.
pub(crate) fn lex(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let next = chars.get(i + 1).copied();
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '\\' | 'λ' => Some(Tok::Backslash),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '>' => Some(Tok::Gt),
            '~' => Some(Tok::Tilde),
            '∈' => Some(Tok::Elem),
            '⊐' => Some(Tok::Approx),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
            continue;
        }
        match (c, next) {
            ('-', Some('>')) => {
                out.push((Tok::Arrow, col));
                i += 2;
                continue;
            }
            ('=', Some('>')) => {
                out.push((Tok::FatArrow, col));
                i += 2;
                continue;
            }
            ('|', Some('-')) => {
                out.push((Tok::Turnstile, col));
                i += 2;
                continue;
            }
            _ => {}
        }
        if is_name_char(c) {
            let start = i;
            while i < chars.len() {
                let d = chars[i];
                let dash_inside = d == '-' && chars.get(i + 1).is_some_and(|&e| is_name_char(e));
                if is_name_char(d) || (i > start && dash_inside) {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
            continue;
        }
        return Err(Diagnostic::new(line_no, col, format!("unexpected character `{c}`")));
    }
    Ok(out)
}

/// Name resolution context: bound names shadow declared variables, which
/// shadow symbols.
pub(crate) struct Scope<'a> {
    pub sig: &'a Signature,
    pub vars: &'a BTreeMap<Name, Type>,
}

pub(crate) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    scope: Scope<'a>,
    bound: Vec<Var>,
}

impl<'a> Parser<'a> {
    pub fn new(text: &str, line: usize, scope: Scope<'a>) -> Result<Self, Diagnostic> {
        let toks = lex(text, line)?;
        Ok(Parser { toks, pos: 0, line, end_col: text.chars().count() + 1, scope, bound: Vec::new() })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    pub fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    pub fn err(&self, col: usize, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.line, col, msg)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    pub fn expect(&mut self, want: Tok) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(self.col(), format!("expected {want}, found {t}"))),
            None => Err(self.err(self.col(), format!("expected {want}, found end of line"))),
        }
    }

    pub fn name(&mut self) -> Result<String, Diagnostic> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            Some(t) => Err(self.err(self.col(), format!("expected a name, found {t}"))),
            None => Err(self.err(self.col(), "expected a name, found end of line")),
        }
    }

    pub fn finish(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(self.col(), format!("unexpected {t}"))),
        }
    }

    pub fn ty(&mut self) -> Result<Type, Diagnostic> {
        let dom = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                t
            }
            _ => {
                let col = self.col();
                let n = self.name()?;
                if !self.scope.sig.has_sort(&n) {
                    return Err(self.err(col, format!("unknown sort `{n}`")));
                }
                Type::base(&n)
            }
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(Type::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Name(_) | Tok::LParen))
    }

    /// A term, type-checked.
    pub fn term(&mut self) -> Result<Term, Diagnostic> {
        let col = self.col();
        let t = self.raw_term()?;
        if self.bound.is_empty() {
            t.type_of(self.scope.sig).map_err(|e| self.err(col, e.to_string()))?;
        }
        Ok(t)
    }

    fn raw_term(&mut self) -> Result<Term, Diagnostic> {
        if self.peek() == Some(&Tok::Backslash) {
            return self.lambda();
        }
        if !self.starts_atom() {
            let msg = match self.peek() {
                Some(t) => format!("expected a term, found {t}"),
                None => "expected a term, found end of line".to_string(),
            };
            return Err(self.err(self.col(), msg));
        }
        let mut t = self.atom()?;
        loop {
            if self.peek() == Some(&Tok::Backslash) {
                let l = self.lambda()?;
                return Ok(Term::app(t, l));
            }
            if !self.starts_atom() {
                return Ok(t);
            }
            t = Term::app(t, self.atom()?);
        }
    }

    fn lambda(&mut self) -> Result<Term, Diagnostic> {
        self.expect(Tok::Backslash)?;
        let n = self.name()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::Dot)?;
        let v = Var { name: name(&n), ty };
        self.bound.push(v.clone());
        let body = self.raw_term();
        self.bound.pop();
        Ok(Term::lam(&v, &body?))
    }

    fn atom(&mut self) -> Result<Term, Diagnostic> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Name(n)) => self.resolve(&n, col),
            Some(Tok::LParen) => {
                if matches!(self.peek(), Some(Tok::Name(_))) && self.peek_at(1) == Some(&Tok::Colon) {
                    let n = self.name()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.ty()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Term::var(Var { name: name(&n), ty }));
                }
                let t = self.raw_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => unreachable!("starts_atom checked"),
        }
    }

    fn resolve(&self, n: &str, col: usize) -> Result<Term, Diagnostic> {
        if let Some(v) = self.bound.iter().rev().find(|v| v.name.as_ref() == n) {
            return Ok(Term::var(v.clone()));
        }
        if let Some(ty) = self.scope.vars.get(n) {
            return Ok(Term::var(Var { name: name(n), ty: ty.clone() }));
        }
        if self.scope.sig.contains(n) {
            return Ok(Term::sym(n));
        }
        Err(self.err(col, format!("unknown name `{n}`")))
    }
}

pub fn parse_type(text: &str, sig: &Signature) -> Result<Type, Diagnostic> {
    let vars = BTreeMap::new();
    let mut p = Parser::new(text, 1, Scope { sig, vars: &vars })?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses and type-checks a single term.
pub fn parse_term(text: &str, sig: &Signature, vars: &BTreeMap<Name, Type>) -> Result<Term, Diagnostic> {
    let mut p = Parser::new(text, 1, Scope { sig, vars })?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

struct PrecDecl {
    line: usize,
    col: usize,
    f: Name,
    g: Name,
    strict: bool,
}

/// Parses a system file. Diagnostics are reported in source order; parsing
/// stops at the first error.
pub fn parse_trs(input: &str) -> Result<Trs, Diagnostic> {
    let mut sig = Signature::new();
    let mut vars: BTreeMap<Name, Type> = BTreeMap::new();
    let mut rules = Vec::new();
    let mut precs: Vec<PrecDecl> = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex(line, line_no)?;
        let Some((Tok::Name(kw), kw_col)) = toks.first().cloned() else {
            if let Some((t, c)) = toks.first() {
                return Err(Diagnostic::new(line_no, *c, format!("expected a declaration keyword, found {t}")));
            }
            continue;
        };
        let mut p = Parser {
            toks,
            pos: 1,
            line: line_no,
            end_col: line.chars().count() + 1,
            scope: Scope { sig: &sig, vars: &vars },
            bound: Vec::new(),
        };
        match kw.as_str() {
            "sort" => {
                let mut names = Vec::new();
                while !p.at_end() {
                    names.push(p.name()?);
                }
                if names.is_empty() {
                    return Err(p.err(p.col(), "expected at least one sort name"));
                }
                drop(p);
                for n in names {
                    sig.add_sort(name(&n));
                }
            }
            "symbol" => {
                let col = p.col();
                let n = p.name()?;
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                let mut status = None;
                if !p.at_end() {
                    let scol = p.col();
                    let kw2 = p.name()?;
                    if kw2 != "status" {
                        return Err(p.err(scol, format!("expected `status`, found `{kw2}`")));
                    }
                    let vcol = p.col();
                    let st = p.name()?;
                    status = Some(st.parse::<Status>().map_err(|e| p.err(vcol, e))?);
                }
                p.finish()?;
                drop(p);
                if vars.contains_key(n.as_str()) {
                    return Err(Diagnostic::new(line_no, col, format!("`{n}` is already declared as a variable")));
                }
                sig.add_symbol(name(&n), ty, status).map_err(|e| Diagnostic::new(line_no, col, e.to_string()))?;
            }
            "var" => {
                let col = p.col();
                let n = p.name()?;
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                p.finish()?;
                drop(p);
                if sig.contains(&n) {
                    return Err(Diagnostic::new(line_no, col, format!("`{n}` is already declared as a symbol")));
                }
                if vars.contains_key(n.as_str()) {
                    return Err(Diagnostic::new(line_no, col, format!("variable `{n}` declared twice")));
                }
                vars.insert(name(&n), ty);
            }
            "prec" => {
                let fcol = p.col();
                let f = p.name()?;
                let strict = match p.bump() {
                    Some(Tok::Gt) => true,
                    Some(Tok::Tilde) => false,
                    _ => return Err(p.err(p.col().saturating_sub(1).max(1), "expected `>` or `~`")),
                };
                let gcol = p.col();
                let g = p.name()?;
                p.finish()?;
                for (s, c) in [(&f, fcol), (&g, gcol)] {
                    if !sig.contains(s) {
                        return Err(Diagnostic::new(line_no, c, format!("undeclared symbol `{s}` in precedence")));
                    }
                }
                precs.push(PrecDecl { line: line_no, col: kw_col, f: name(&f), g: name(&g), strict });
            }
            "rule" => {
                let lcol = p.col();
                let lhs = p.term()?;
                p.expect(Tok::Arrow)?;
                let rcol = p.col();
                let rhs = p.term()?;
                p.finish()?;
                let rule = Rule::new(lhs, rhs, &sig).map_err(|e| {
                    let col = if matches!(e, crate::error::RuleError::FreeVariable(_)) { rcol } else { lcol };
                    Diagnostic::new(line_no, col, e.to_string())
                })?;
                rules.push(rule);
            }
            other => {
                return Err(Diagnostic::new(line_no, kw_col, format!("unknown declaration `{other}`")));
            }
        }
    }

    let greater: Vec<(Name, Name)> = precs.iter().filter(|d| d.strict).map(|d| (d.f.clone(), d.g.clone())).collect();
    let equiv: Vec<(Name, Name)> = precs.iter().filter(|d| !d.strict).map(|d| (d.f.clone(), d.g.clone())).collect();
    let prec =
        Precedence::from_decls(sig.symbol_names().cloned(), greater, equiv).map_err(|e| Diagnostic::new(1, 1, e.to_string()))?;
    Trs::new(sig, vars, rules, prec).map_err(|errs| {
        let e = &errs[0];
        let involved: BTreeSet<&Name> = match e {
            PrecedenceError::Cycle(c) | PrecedenceError::StatusMismatch(c) => c.iter().collect(),
            PrecedenceError::UndeclaredSymbol(s) => [s].into_iter().collect(),
        };
        let at =
            precs.iter().find(|d| involved.contains(&d.f) || involved.contains(&d.g)).map(|d| (d.line, d.col)).unwrap_or((1, 1));
        Diagnostic::new(at.0, at.1, e.to_string())
    })
}
