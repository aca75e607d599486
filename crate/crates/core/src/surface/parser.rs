use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::syntax::{
    rename, substitute_proc, Ident, Name, ProcVar, Process, ProcessKind, ReceiveBranch, Span, Tag,
};
use crate::types::{dual, well_formed, Branch, Hint, Polarity, Type};

use super::diag::Diagnostic;
use super::lexer::{lex, Tok};

const KEYWORDS: &[&str] = &["def", "base", "proc", "rec", "end", "Top", "dual", "open", "close"];

/// Placeholder binder name that no identifier can match.
const ANON: &str = "\0";

/// A type as written, before names are resolved.
#[derive(Clone, Debug)]
enum TyExpr {
    End,
    Top,
    Name(String, Span),
    Choice(Polarity, Vec<BranchExpr>),
    Rec(String, Box<TyExpr>),
    Dual(Box<TyExpr>, Span),
}

#[derive(Clone, Debug)]
struct BranchExpr {
    tag: Tag,
    var: Option<String>,
    bound: Option<TyExpr>,
    payload: Option<Option<TyExpr>>,
    cont: TyExpr,
    span: Span,
}

#[derive(Clone, Debug)]
pub struct TypeDef {
    pub name: String,
    pub span: Span,
    body: TyExpr,
    /// The definition as a closed type, if it has no free type variables.
    pub closed: Option<Type>,
}

#[derive(Clone, Debug)]
pub struct ProcDef {
    pub name: String,
    pub params: Vec<(Ident, Type)>,
    pub body: Process,
    pub span: Span,
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub type_defs: Vec<TypeDef>,
    pub base_types: Vec<String>,
    pub procs: Vec<ProcDef>,
    /// Body of `proc Main()`.
    pub entry: Option<Process>,
    arities: BTreeMap<Tag, bool>,
    counters: HashMap<String, u32>,
}

impl Program {
    pub fn type_def(&self, name: &str) -> Option<&TypeDef> {
        self.type_defs.iter().find(|d| d.name == name)
    }

    pub fn proc_def(&self, name: &str) -> Option<&ProcDef> {
        self.procs.iter().find(|d| d.name == name)
    }

    /// Closed, named types of the program, in declaration order.
    pub fn closed_types(&self) -> Vec<(String, Type)> {
        self.type_defs.iter().filter_map(|d| d.closed.clone().map(|t| (d.name.clone(), t))).collect()
    }

    /// Parse a type in the context of this program's declarations.
    pub fn parse_type(&self, text: &str) -> Result<Type, Diagnostic> {
        let mut p = Parser::new(text, self.clone())?;
        let e = p.ty()?;
        p.expect(Tok::Eof)?;
        p.resolve(&e, &mut Vec::new(), p.program.type_defs.len())
    }

    /// Parse a process in the context of this program's declarations.
    pub fn parse_process(&self, text: &str) -> Result<Process, Diagnostic> {
        let mut p = Parser::new(text, self.clone())?;
        let mut scope = Scope::default();
        let proc = p.process(&mut scope)?;
        p.expect(Tok::Eof)?;
        Ok(proc)
    }

    pub fn arity(&self, tag: &Tag) -> Option<bool> {
        self.arities.get(tag).copied()
    }
}

pub fn parse_program(text: &str) -> Result<Program, Diagnostic> {
    let mut p = Parser::new(text, Program::default())?;
    loop {
        let (tok, span) = p.peek().clone();
        match tok {
            Tok::Eof => break,
            Tok::Ident(k) if k == "def" => p.type_decl()?,
            Tok::Ident(k) if k == "base" => p.base_decl()?,
            Tok::Ident(k) if k == "proc" => p.proc_decl()?,
            other => {
                return Err(Diagnostic::error(
                    "syntax",
                    format!("expected `def`, `base` or `proc`, found {}", other.describe()),
                    span,
                ))
            }
        }
    }
    Ok(p.program)
}

#[derive(Default, Clone)]
struct Scope {
    names: Vec<(String, Name)>,
    procs: Vec<(String, ProcVar)>,
}

impl Scope {
    fn name(&self, s: &str) -> Option<&Name> {
        self.names.iter().rev().find(|(n, _)| n == s).map(|(_, v)| v)
    }
    fn proc(&self, s: &str) -> Option<&ProcVar> {
        self.procs.iter().rev().find(|(n, _)| n == s).map(|(_, v)| v)
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    program: Program,
}

impl Parser {
    fn new(text: &str, program: Program) -> Result<Self, Diagnostic> {
        Ok(Parser { toks: lex(text)?, pos: 0, program })
    }

    fn peek(&self) -> &(Tok, Span) {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().0 == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, Diagnostic> {
        let (t, span) = self.peek().clone();
        if t == tok {
            self.bump();
            Ok(span)
        } else {
            Err(Diagnostic::error("syntax", format!("expected {}, found {}", tok.describe(), t.describe()), span))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), Diagnostic> {
        let (t, span) = self.peek().clone();
        match t {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok((s, span))
            }
            other => Err(Diagnostic::error("syntax", format!("expected an identifier, found {}", other.describe()), span)),
        }
    }

    fn fresh(&mut self, base: &str) -> Ident {
        let n = self.program.counters.entry(base.to_string()).or_insert(0);
        let id = Ident::with_index(base, *n);
        *n += 1;
        id
    }

    fn note_arity(&mut self, tag: &Tag, has_arg: bool, span: Span) -> Result<(), Diagnostic> {
        match self.program.arities.get(tag) {
            Some(&prev) if prev != has_arg => Err(Diagnostic::error(
                "arity",
                format!(
                    "tag `{tag}` is used {} an argument here but {} one elsewhere",
                    if has_arg { "with" } else { "without" },
                    if prev { "with" } else { "without" }
                ),
                span,
            )),
            _ => {
                self.program.arities.insert(tag.clone(), has_arg);
                Ok(())
            }
        }
    }

    fn declared(&self, name: &str) -> bool {
        self.program.type_defs.iter().any(|d| d.name == name)
            || self.program.base_types.iter().any(|b| b == name)
            || self.program.procs.iter().any(|d| d.name == name)
    }

    fn check_new(&self, name: &str, span: Span) -> Result<(), Diagnostic> {
        if self.declared(name) {
            Err(Diagnostic::error("duplicate", format!("`{name}` is declared twice"), span))
        } else {
            Ok(())
        }
    }

    // ---- declarations ----

    fn type_decl(&mut self) -> Result<(), Diagnostic> {
        let start = self.bump().1;
        let (name, span) = self.ident()?;
        self.check_new(&name, span)?;
        self.expect(Tok::Eq)?;
        let body = self.ty()?;
        let visible = self.program.type_defs.len();
        let closed = match self.resolve(&body, &mut Vec::new(), visible) {
            Ok(t) => {
                well_formed(&t, &BTreeSet::new(), &BTreeSet::new())
                    .map_err(|e| Diagnostic::error("ill-formed", format!("type `{name}`: {e}"), span))?;
                Some(t)
            }
            Err(d) if d.code == "unbound" => None,
            Err(d) => return Err(d),
        };
        self.program.type_defs.push(TypeDef { name, span: start.to(span), body, closed });
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), Diagnostic> {
        self.bump();
        let (name, span) = self.ident()?;
        self.check_new(&name, span)?;
        self.program.base_types.push(name);
        Ok(())
    }

    fn proc_decl(&mut self) -> Result<(), Diagnostic> {
        let start = self.bump().1;
        let (name, span) = self.ident()?;
        self.check_new(&name, span)?;
        let mut scope = Scope::default();
        let mut params = Vec::new();
        if self.eat(&Tok::LParen) {
            if !self.eat(&Tok::RParen) {
                loop {
                    let (p, pspan) = self.ident()?;
                    if scope.names.iter().any(|(n, _)| *n == p) {
                        return Err(Diagnostic::error("duplicate", format!("parameter `{p}` is declared twice"), pspan));
                    }
                    self.expect(Tok::Colon)?;
                    let t = self.closed_type()?;
                    let id = self.fresh(&p);
                    scope.names.push((p, Name::Var(id.clone())));
                    params.push((id, t));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
            }
        }
        if name == "Main" && !params.is_empty() {
            return Err(Diagnostic::error("entry", "`Main` takes no parameters", span));
        }
        self.expect(Tok::Eq)?;
        let body = self.process(&mut scope)?;
        if name == "Main" {
            self.program.entry = Some(body.clone());
        }
        self.program.procs.push(ProcDef { name, params, body, span: start.to(span) });
        Ok(())
    }

    /// A type in a position where no type variable is in scope; must be
    /// well-formed.
    fn closed_type(&mut self) -> Result<Type, Diagnostic> {
        let start = self.peek().1;
        let e = self.ty()?;
        let span = start.to(self.toks[self.pos.saturating_sub(1)].1);
        let t = self.resolve(&e, &mut Vec::new(), self.program.type_defs.len())?;
        well_formed(&t, &BTreeSet::new(), &BTreeSet::new())
            .map_err(|err| Diagnostic::error("ill-formed", err.to_string(), span))?;
        Ok(t)
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TyExpr, Diagnostic> {
        let (tok, span) = self.peek().clone();
        match tok {
            Tok::Ident(k) if k == "rec" => {
                self.bump();
                let (v, _) = self.ident()?;
                self.expect(Tok::Dot)?;
                Ok(TyExpr::Rec(v, Box::new(self.ty()?)))
            }
            Tok::Ident(k) if k == "end" => {
                self.bump();
                Ok(TyExpr::End)
            }
            Tok::Ident(k) if k == "Top" => {
                self.bump();
                Ok(TyExpr::Top)
            }
            Tok::Ident(k) if k == "dual" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let inner = self.ty()?;
                let close = self.expect(Tok::RParen)?;
                Ok(TyExpr::Dual(Box::new(inner), span.to(close)))
            }
            Tok::Ident(_) => {
                let (n, span) = self.ident()?;
                Ok(TyExpr::Name(n, span))
            }
            Tok::Internal | Tok::External => {
                self.bump();
                let pol = if tok == Tok::Internal { Polarity::Internal } else { Polarity::External };
                let mut branches = vec![self.branch()?];
                while self.eat(&Tok::Comma) {
                    if self.peek().0 == Tok::RBrace {
                        break;
                    }
                    branches.push(self.branch()?);
                }
                self.expect(Tok::RBrace)?;
                Ok(TyExpr::Choice(pol, branches))
            }
            Tok::Bang | Tok::Query => {
                self.bump();
                let pol = if tok == Tok::Bang { Polarity::Internal } else { Polarity::External };
                Ok(TyExpr::Choice(pol, vec![self.branch()?]))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(Diagnostic::error("syntax", format!("expected a type, found {}", other.describe()), span)),
        }
    }

    fn branch(&mut self) -> Result<BranchExpr, Diagnostic> {
        let (tag, start) = self.ident()?;
        let mut var = None;
        let mut bound = None;
        if self.eat(&Tok::LAngle) {
            var = Some(self.ident()?.0);
            if self.eat(&Tok::SubtypeOf) {
                bound = Some(self.ty()?);
            }
            self.expect(Tok::RAngle)?;
        }
        let mut payload = None;
        if self.eat(&Tok::LParen) {
            if self.eat(&Tok::RParen) {
                payload = Some(None);
            } else {
                payload = Some(Some(self.ty()?));
                self.expect(Tok::RParen)?;
            }
        }
        self.expect(Tok::Dot)?;
        let cont = self.ty()?;
        Ok(BranchExpr { tag: Tag::new(&tag), var, bound, payload, cont, span: start })
    }

    /// Resolve names: binders in `scope` (innermost last), then base types,
    /// then the first `visible` definitions. A definition body is resolved
    /// in the scope of its use, so its free variables may refer to binders
    /// enclosing the use.
    fn resolve(&mut self, e: &TyExpr, scope: &mut Vec<String>, visible: usize) -> Result<Type, Diagnostic> {
        Ok(match e {
            TyExpr::End => Type::End,
            TyExpr::Top => Type::Top,
            TyExpr::Name(n, span) => {
                if let Some(pos) = scope.iter().rposition(|s| s == n) {
                    Type::Bound(scope.len() - 1 - pos)
                } else if self.program.base_types.contains(n) {
                    Type::Base(Arc::from(n.as_str()))
                } else if let Some(i) = self.program.type_defs[..visible].iter().position(|d| &d.name == n) {
                    let body = self.program.type_defs[i].body.clone();
                    self.resolve(&body, scope, i).map_err(|mut d| {
                        if d.code == "unbound" {
                            d.message = format!("{} (in the definition of `{n}` used here)", d.message);
                            d.span = *span;
                        }
                        d
                    })?
                } else {
                    return Err(Diagnostic::error("unbound", format!("unknown type `{n}`"), *span));
                }
            }
            TyExpr::Rec(v, body) => {
                scope.push(v.clone());
                let b = self.resolve(body, scope, visible);
                scope.pop();
                Type::rec(v, b?)
            }
            TyExpr::Dual(inner, span) => {
                let t = self.resolve(inner, scope, visible)?;
                dual(&t).map_err(|err| Diagnostic::error("dual", err.to_string(), *span))?
            }
            TyExpr::Choice(pol, branches) => {
                let mut out = Vec::with_capacity(branches.len());
                let mut seen = BTreeSet::new();
                for b in branches {
                    if !seen.insert(b.tag.clone()) {
                        return Err(Diagnostic::error("duplicate-tag", format!("tag `{}` appears twice", b.tag), b.span));
                    }
                    let has_arg = matches!(b.payload, Some(Some(_)));
                    self.note_arity(&b.tag, has_arg, b.span)?;
                    let bound = match &b.bound {
                        Some(t) => self.resolve(t, scope, visible)?,
                        None => Type::Top,
                    };
                    let var = b.var.clone().unwrap_or_else(|| ANON.to_string());
                    scope.push(var.clone());
                    let payload = match &b.payload {
                        Some(Some(p)) => self.resolve(p, scope, visible).map(Some),
                        _ => Ok(None),
                    };
                    let cont = payload.and_then(|p| Ok((p, self.resolve(&b.cont, scope, visible)?)));
                    scope.pop();
                    let (payload, cont) = cont?;
                    let hint = if var == ANON { "_" } else { var.as_str() };
                    out.push(Branch { tag: b.tag.clone(), var: Hint::new(hint), bound, payload, cont });
                }
                Type::choice(*pol, out)
            }
        })
    }

    // ---- processes ----

    fn process(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let mut left = self.choice(scope)?;
        while self.eat(&Tok::Par) {
            let right = self.choice(scope)?;
            left = Process::par(left, right);
        }
        Ok(left)
    }

    fn choice(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let mut left = self.sum(scope)?;
        while self.eat(&Tok::OPlus) {
            let right = self.sum(scope)?;
            let span = left.span.to(right.span);
            left = Process::new(ProcessKind::Choice(Box::new(left), Box::new(right)), span);
        }
        Ok(left)
    }

    fn sum(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let first = self.prefix(scope)?;
        if self.peek().0 != Tok::Plus {
            return Ok(first);
        }
        let span0 = first.span;
        let ProcessKind::Receive { subject, mut branches } = first.kind else {
            return Err(Diagnostic::error("syntax", "`+` may only join receives on one endpoint", span0));
        };
        let mut span = span0;
        while self.eat(&Tok::Plus) {
            let next = self.prefix(scope)?;
            span = span.to(next.span);
            match next.kind {
                ProcessKind::Receive { subject: s, branches: more } if s == subject => {
                    for b in more {
                        if branches.iter().any(|x| x.tag == b.tag) {
                            return Err(Diagnostic::error(
                                "duplicate-tag",
                                format!("tag `{}` is handled twice", b.tag),
                                b.span,
                            ));
                        }
                        branches.push(b);
                    }
                }
                _ => {
                    return Err(Diagnostic::error(
                        "syntax",
                        "`+` may only join receives on one endpoint",
                        next.span,
                    ))
                }
            }
        }
        Ok(Process::new(ProcessKind::Receive { subject, branches }, span))
    }

    fn name_ref(&mut self, scope: &Scope) -> Result<Name, Diagnostic> {
        let (n, span) = self.ident()?;
        scope.name(&n).cloned().ok_or_else(|| Diagnostic::error("unbound", format!("unknown name `{n}`"), span))
    }

    fn prefix(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let (tok, span) = self.peek().clone();
        match tok {
            Tok::Zero => {
                self.bump();
                Ok(Process::new(ProcessKind::Idle, span))
            }
            Tok::LParen => {
                self.bump();
                let p = self.process(scope)?;
                let close = self.expect(Tok::RParen)?;
                Ok(Process { span: span.to(close), ..p })
            }
            Tok::Ident(k) if k == "close" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let u = self.name_ref(scope)?;
                let close = self.expect(Tok::RParen)?;
                Ok(Process::new(ProcessKind::Close(u), span.to(close)))
            }
            Tok::Ident(k) if k == "open" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let (a, _) = self.ident()?;
                let annotation = if self.eat(&Tok::Colon) { Some(self.closed_type()?) } else { None };
                self.expect(Tok::Comma)?;
                let (b, bspan) = self.ident()?;
                if a == b {
                    return Err(Diagnostic::error("duplicate", "the two endpoints of `open` need distinct names", bspan));
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                let (ia, ib) = (self.fresh(&a), self.fresh(&b));
                scope.names.push((a, Name::Loc(ia.clone())));
                scope.names.push((b, Name::Loc(ib.clone())));
                let body = self.prefix(scope);
                scope.names.truncate(scope.names.len() - 2);
                let body = body?;
                let span = span.to(body.span);
                Ok(Process::new(
                    ProcessKind::Open { left: ia, right: ib, annotation, body: Box::new(body) },
                    span,
                ))
            }
            Tok::Ident(k) if k == "rec" => {
                self.bump();
                let (x, _) = self.ident()?;
                self.expect(Tok::Dot)?;
                let var = ProcVar(self.fresh(&x));
                scope.procs.push((x, var.clone()));
                let body = self.prefix(scope);
                scope.procs.pop();
                let body = body?;
                let span = span.to(body.span);
                Ok(Process::new(ProcessKind::Rec { var, body: Box::new(body) }, span))
            }
            Tok::Ident(_) => match self.peek_at(1).clone() {
                Tok::Bang => self.send(scope),
                Tok::Query => self.receive(scope),
                Tok::LParen => self.call(scope),
                _ => {
                    let (x, span) = self.ident()?;
                    let var = scope
                        .proc(&x)
                        .cloned()
                        .ok_or_else(|| Diagnostic::error("unbound", format!("unknown process variable `{x}`"), span))?;
                    Ok(Process::new(ProcessKind::Var(var), span))
                }
            },
            other => Err(Diagnostic::error("syntax", format!("expected a process, found {}", other.describe()), span)),
        }
    }

    fn send(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let start = self.peek().1;
        let subject = self.name_ref(scope)?;
        self.expect(Tok::Bang)?;
        let (tag, tspan) = self.ident()?;
        let tag = Tag::new(&tag);
        let instantiation = if self.eat(&Tok::LAngle) {
            let t = self.closed_type()?;
            self.expect(Tok::RAngle)?;
            Some(t)
        } else {
            None
        };
        let mut argument = None;
        if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
            argument = Some(self.name_ref(scope)?);
            self.expect(Tok::RParen)?;
        }
        self.note_arity(&tag, argument.is_some(), tspan)?;
        self.expect(Tok::Dot)?;
        let body = self.prefix(scope)?;
        let span = start.to(body.span);
        Ok(Process::new(ProcessKind::Send { subject, tag, instantiation, argument, body: Box::new(body) }, span))
    }

    fn receive(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let start = self.peek().1;
        let subject = self.name_ref(scope)?;
        self.expect(Tok::Query)?;
        let (tag, tspan) = self.ident()?;
        let tag = Tag::new(&tag);
        let mut binder = None;
        if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
            binder = Some(self.ident()?.0);
            self.expect(Tok::RParen)?;
        }
        self.note_arity(&tag, binder.is_some(), tspan)?;
        self.expect(Tok::Dot)?;
        let id = binder.map(|x| {
            let id = self.fresh(&x);
            scope.names.push((x, Name::Var(id.clone())));
            id
        });
        let body = self.prefix(scope);
        if id.is_some() {
            scope.names.pop();
        }
        let body = body?;
        let span = start.to(body.span);
        let branch = ReceiveBranch { tag, binder: id, body, span: start.to(tspan) };
        Ok(Process::new(ProcessKind::Receive { subject, branches: vec![branch] }, span))
    }

    /// `Name(args)`: the body of an earlier process declaration, with fresh
    /// binders and the arguments substituted for the parameters.
    fn call(&mut self, scope: &mut Scope) -> Result<Process, Diagnostic> {
        let (name, start) = self.ident()?;
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.name_ref(scope)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        let span = start.to(self.toks[self.pos - 1].1);
        let Some(def) = self.program.proc_def(&name).cloned() else {
            return Err(Diagnostic::error("unbound", format!("unknown process `{name}` (only earlier declarations may be called)"), start));
        };
        if def.params.len() != args.len() {
            return Err(Diagnostic::error(
                "arity",
                format!("`{name}` takes {} argument(s), {} given", def.params.len(), args.len()),
                span,
            ));
        }
        let mut body = self.refresh(&def.body);
        for ((param, _), arg) in def.params.iter().zip(&args) {
            body = rename(&body, &Name::Var(param.clone()), arg);
        }
        Ok(body)
    }

    /// Give every binder of `p` a new identifier.
    fn refresh(&mut self, p: &Process) -> Process {
        let kind = match &p.kind {
            ProcessKind::Idle | ProcessKind::Var(_) | ProcessKind::Close(_) => return p.clone(),
            ProcessKind::Open { left, right, annotation, body } => {
                let (l, r) = (self.fresh(left.base()), self.fresh(right.base()));
                let body = self.refresh(body);
                let body = rename(&body, &Name::Loc(left.clone()), &Name::Loc(l.clone()));
                let body = rename(&body, &Name::Loc(right.clone()), &Name::Loc(r.clone()));
                ProcessKind::Open { left: l, right: r, annotation: annotation.clone(), body: Box::new(body) }
            }
            ProcessKind::Send { subject, tag, instantiation, argument, body } => ProcessKind::Send {
                subject: subject.clone(),
                tag: tag.clone(),
                instantiation: instantiation.clone(),
                argument: argument.clone(),
                body: Box::new(self.refresh(body)),
            },
            ProcessKind::Receive { subject, branches } => ProcessKind::Receive {
                subject: subject.clone(),
                branches: branches
                    .iter()
                    .map(|b| {
                        let body = self.refresh(&b.body);
                        let (binder, body) = match &b.binder {
                            Some(x) => {
                                let y = self.fresh(x.base());
                                let body = rename(&body, &Name::Var(x.clone()), &Name::Var(y.clone()));
                                (Some(y), body)
                            }
                            None => (None, body),
                        };
                        ReceiveBranch { tag: b.tag.clone(), binder, body, span: b.span }
                    })
                    .collect(),
            },
            ProcessKind::Choice(l, r) => ProcessKind::Choice(Box::new(self.refresh(l)), Box::new(self.refresh(r))),
            ProcessKind::Parallel(l, r) => {
                ProcessKind::Parallel(Box::new(self.refresh(l)), Box::new(self.refresh(r)))
            }
            ProcessKind::Rec { var, body } => {
                let fresh = ProcVar(self.fresh(var.0.base()));
                let body = self.refresh(body);
                let body = substitute_proc(&body, &Process::new(ProcessKind::Var(fresh.clone()), p.span), var);
                ProcessKind::Rec { var: fresh, body: Box::new(body) }
            }
        };
        Process::new(kind, p.span)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::free_names;
    use crate::types::type_equal;

    const CELL: &str = "def CellT = rec a. +{ set<b>(b). &{ get(b). a }, free. end }\n";

    #[test]
    fn empty_file() {
        let p = parse_program("").unwrap();
        assert!(p.type_defs.is_empty() && p.procs.is_empty() && p.entry.is_none());
    }

    #[test]
    fn cell_type() {
        let p = parse_program(CELL).unwrap();
        let t = p.type_def("CellT").unwrap().closed.clone().unwrap();
        let Type::Rec(_, body) = &t else { panic!() };
        let Type::Choice(Polarity::Internal, bs) = &**body else { panic!() };
        assert_eq!(bs.len(), 2);
        assert_eq!(bs[0].payload, Some(Type::Bound(0)));
        assert!(bs[1].payload.is_none());
    }

    #[test]
    fn dual_of_names_and_sugar() {
        let p = parse_program(CELL).unwrap();
        let a = p.parse_type("dual(CellT)").unwrap();
        let b = p.parse_type("rec a. &{ set<b>(b). !get(b). a, free(). end }").unwrap();
        assert!(type_equal(&a, &b));
    }

    #[test]
    fn definitions_resolve_free_variables_at_use() {
        let src = "def Stream = rec s. +{ m(alpha). s, eos. end }\n\
                   def A = &{ src<alpha>(dual(Stream)). &{ dest(Stream). end } }\n";
        let p = parse_program(src).unwrap();
        assert!(p.type_def("Stream").unwrap().closed.is_none());
        assert!(p.type_def("A").unwrap().closed.is_some());
        assert!(p.parse_type("Stream").is_err());
    }

    #[test]
    fn fragment_and_calls() {
        let src = "proc Leak() = open(e : +{ arg<a>(a). end }, f). e!arg(f). close(e)\n\
                   proc Id(c: end) = close(c)\n\
                   proc Main() = open(x : end, y). (Id(x) || Id(y))";
        let p = parse_program(src).unwrap();
        let main = p.entry.clone().unwrap();
        assert!(free_names(&main).is_empty());
        let ProcessKind::Open { body, .. } = &main.kind else { panic!() };
        assert!(matches!(body.kind, ProcessKind::Parallel(..)));
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse_program("proc Main() = close(z)").unwrap_err();
        assert_eq!(e.code, "unbound");
        assert_eq!(e.span, Span::new(20, 21));
        let e = parse_program("def T = +{ m(end). end, m. end }").unwrap_err();
        assert_eq!(e.code, "duplicate-tag");
        let e = parse_program("def T = +{ m(end). end }\ndef U = &{ m. end }").unwrap_err();
        assert_eq!(e.code, "arity");
        let e = parse_program("proc Main() = open(a : end, b). (a?m(). 0 + b?n(). 0)").unwrap_err();
        assert_eq!(e.code, "syntax");
        assert!(parse_program("def T = +{ m<a>(end). a }").is_err());
    }
}
