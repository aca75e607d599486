//! Abstract syntax of processes, queues and heaps.
//!
//! Every binder introduced by the parser carries a program-unique [`Ident`],
//! so bound names never collide with each other or with free names and
//! substitution can proceed without renaming.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::types::Type;

/// Byte range into a source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// Message tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tag(pub Arc<str>);

impl Tag {
    pub fn new(s: &str) -> Self {
        Tag(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An identifier: the name as written plus a disambiguating index.
///
/// Source identifiers start at index 0; re-used binder names get higher
/// indices. Heap locations allocated at run time are flagged `heap` and are
/// therefore never equal to any identifier occurring in source.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident {
    base: Arc<str>,
    index: u32,
    heap: bool,
}

impl Ident {
    pub fn new(base: &str) -> Self {
        Ident { base: Arc::from(base), index: 0, heap: false }
    }

    pub fn with_index(base: &str, index: u32) -> Self {
        Ident { base: Arc::from(base), index, heap: false }
    }

    pub(crate) fn heap(base: Arc<str>, ordinal: u32) -> Self {
        Ident { base, index: ordinal, heap: true }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_heap(&self) -> bool {
        self.heap
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.heap, self.index) {
            (false, 0) | (true, 1) => f.write_str(&self.base),
            (false, n) => write!(f, "{}'{}", self.base, n),
            (true, n) => write!(f, "{}@{}", self.base, n),
        }
    }
}

/// A name: either a heap location or a program variable. The two
/// namespaces are disjoint; equality is namespace-aware.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Name {
    Loc(Ident),
    Var(Ident),
}

impl Name {
    pub fn ident(&self) -> &Ident {
        match self {
            Name::Loc(i) | Name::Var(i) => i,
        }
    }

    pub fn as_loc(&self) -> Option<&Ident> {
        match self {
            Name::Loc(i) => Some(i),
            Name::Var(_) => None,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ident().fmt(f)
    }
}

/// Process variable, bound by `rec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProcVar(pub Ident);

impl fmt::Display for ProcVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug)]
pub struct Process {
    pub kind: ProcessKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct ReceiveBranch {
    pub tag: Tag,
    /// Present iff the tag carries an argument.
    pub binder: Option<Ident>,
    pub body: Process,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum ProcessKind {
    Idle,
    Var(ProcVar),
    Close(Name),
    /// `open(a : T, b). P`; binds the two locations in the body. The
    /// annotation types `a`, and `b` gets its dual.
    Open {
        left: Ident,
        right: Ident,
        annotation: Option<Type>,
        body: Box<Process>,
    },
    Send {
        subject: Name,
        tag: Tag,
        instantiation: Option<Type>,
        argument: Option<Name>,
        body: Box<Process>,
    },
    Receive {
        subject: Name,
        branches: Vec<ReceiveBranch>,
    },
    Choice(Box<Process>, Box<Process>),
    Parallel(Box<Process>, Box<Process>),
    Rec {
        var: ProcVar,
        body: Box<Process>,
    },
}

impl Process {
    pub fn new(kind: ProcessKind, span: Span) -> Self {
        Process { kind, span }
    }

    pub fn idle() -> Self {
        Process::new(ProcessKind::Idle, Span::default())
    }

    pub fn close(u: Name) -> Self {
        Process::new(ProcessKind::Close(u), Span::default())
    }

    pub fn par(left: Process, right: Process) -> Self {
        let span = left.span.to(right.span);
        Process::new(ProcessKind::Parallel(Box::new(left), Box::new(right)), span)
    }

    /// Parallel composition of a list of atoms; `Idle` for the empty list.
    pub fn par_all(atoms: impl IntoIterator<Item = Process>) -> Self {
        let mut iter = atoms.into_iter();
        let Some(first) = iter.next() else {
            return Process::idle();
        };
        iter.fold(first, Process::par)
    }

    pub fn is_idle(&self) -> bool {
        matches!(self.kind, ProcessKind::Idle)
    }
}

/// Free names of a process.
pub fn free_names(p: &Process) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(p, &mut out);
    out
}

fn collect_free(p: &Process, out: &mut BTreeSet<Name>) {
    match &p.kind {
        ProcessKind::Idle | ProcessKind::Var(_) => {}
        ProcessKind::Close(u) => {
            out.insert(u.clone());
        }
        ProcessKind::Open { left, right, body, .. } => {
            let mut inner = BTreeSet::new();
            collect_free(body, &mut inner);
            inner.remove(&Name::Loc(left.clone()));
            inner.remove(&Name::Loc(right.clone()));
            out.extend(inner);
        }
        ProcessKind::Send { subject, argument, body, .. } => {
            out.insert(subject.clone());
            if let Some(v) = argument {
                out.insert(v.clone());
            }
            collect_free(body, out);
        }
        ProcessKind::Receive { subject, branches } => {
            out.insert(subject.clone());
            for b in branches {
                let mut inner = BTreeSet::new();
                collect_free(&b.body, &mut inner);
                if let Some(x) = &b.binder {
                    inner.remove(&Name::Var(x.clone()));
                }
                out.extend(inner);
            }
        }
        ProcessKind::Choice(l, r) | ProcessKind::Parallel(l, r) => {
            collect_free(l, out);
            collect_free(r, out);
        }
        ProcessKind::Rec { body, .. } => collect_free(body, out),
    }
}

/// Free process variables.
pub fn free_proc_vars(p: &Process) -> BTreeSet<ProcVar> {
    fn go(p: &Process, out: &mut BTreeSet<ProcVar>) {
        match &p.kind {
            ProcessKind::Var(x) => {
                out.insert(x.clone());
            }
            ProcessKind::Idle | ProcessKind::Close(_) => {}
            ProcessKind::Open { body, .. } | ProcessKind::Send { body, .. } => go(body, out),
            ProcessKind::Receive { branches, .. } => branches.iter().for_each(|b| go(&b.body, out)),
            ProcessKind::Choice(l, r) | ProcessKind::Parallel(l, r) => {
                go(l, out);
                go(r, out);
            }
            ProcessKind::Rec { var, body } => {
                let mut inner = BTreeSet::new();
                go(body, &mut inner);
                inner.remove(var);
                out.extend(inner);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(p, &mut out);
    out
}

/// Replace every free occurrence of `target` by `value`.
///
/// Relies on binders being distinct from free names, so no capture check
/// is performed.
pub fn substitute_name(p: &Process, value: &Name, target: &Ident) -> Process {
    rename(p, &Name::Var(target.clone()), value)
}

/// Replace free occurrences of `from` (either namespace) by `to`.
pub fn rename(p: &Process, from: &Name, to: &Name) -> Process {
    let swap = |n: &Name| if n == from { to.clone() } else { n.clone() };
    let kind = match &p.kind {
        ProcessKind::Idle => ProcessKind::Idle,
        ProcessKind::Var(x) => ProcessKind::Var(x.clone()),
        ProcessKind::Close(u) => ProcessKind::Close(swap(u)),
        ProcessKind::Open { left, right, annotation, body } => {
            let shadowed = matches!(from, Name::Loc(i) if i == left || i == right);
            ProcessKind::Open {
                left: left.clone(),
                right: right.clone(),
                annotation: annotation.clone(),
                body: Box::new(if shadowed { (**body).clone() } else { rename(body, from, to) }),
            }
        }
        ProcessKind::Send { subject, tag, instantiation, argument, body } => ProcessKind::Send {
            subject: swap(subject),
            tag: tag.clone(),
            instantiation: instantiation.clone(),
            argument: argument.as_ref().map(swap),
            body: Box::new(rename(body, from, to)),
        },
        ProcessKind::Receive { subject, branches } => ProcessKind::Receive {
            subject: swap(subject),
            branches: branches
                .iter()
                .map(|b| {
                    let shadowed = matches!((from, &b.binder), (Name::Var(i), Some(x)) if i == x);
                    ReceiveBranch {
                        tag: b.tag.clone(),
                        binder: b.binder.clone(),
                        body: if shadowed { b.body.clone() } else { rename(&b.body, from, to) },
                        span: b.span,
                    }
                })
                .collect(),
        },
        ProcessKind::Choice(l, r) => {
            ProcessKind::Choice(Box::new(rename(l, from, to)), Box::new(rename(r, from, to)))
        }
        ProcessKind::Parallel(l, r) => {
            ProcessKind::Parallel(Box::new(rename(l, from, to)), Box::new(rename(r, from, to)))
        }
        ProcessKind::Rec { var, body } => {
            ProcessKind::Rec { var: var.clone(), body: Box::new(rename(body, from, to)) }
        }
    };
    Process::new(kind, p.span)
}

/// Replace free occurrences of the process variable `var` by `value`.
pub fn substitute_proc(p: &Process, value: &Process, var: &ProcVar) -> Process {
    let kind = match &p.kind {
        ProcessKind::Var(x) if x == var => return value.clone(),
        ProcessKind::Rec { var: inner, .. } if inner == var => return p.clone(),
        ProcessKind::Idle | ProcessKind::Var(_) | ProcessKind::Close(_) => return p.clone(),
        ProcessKind::Open { left, right, annotation, body } => ProcessKind::Open {
            left: left.clone(),
            right: right.clone(),
            annotation: annotation.clone(),
            body: Box::new(substitute_proc(body, value, var)),
        },
        ProcessKind::Send { subject, tag, instantiation, argument, body } => ProcessKind::Send {
            subject: subject.clone(),
            tag: tag.clone(),
            instantiation: instantiation.clone(),
            argument: argument.clone(),
            body: Box::new(substitute_proc(body, value, var)),
        },
        ProcessKind::Receive { subject, branches } => ProcessKind::Receive {
            subject: subject.clone(),
            branches: branches
                .iter()
                .map(|b| ReceiveBranch {
                    tag: b.tag.clone(),
                    binder: b.binder.clone(),
                    body: substitute_proc(&b.body, value, var),
                    span: b.span,
                })
                .collect(),
        },
        ProcessKind::Choice(l, r) => ProcessKind::Choice(
            Box::new(substitute_proc(l, value, var)),
            Box::new(substitute_proc(r, value, var)),
        ),
        ProcessKind::Parallel(l, r) => ProcessKind::Parallel(
            Box::new(substitute_proc(l, value, var)),
            Box::new(substitute_proc(r, value, var)),
        ),
        ProcessKind::Rec { var: inner, body } => ProcessKind::Rec {
            var: inner.clone(),
            body: Box::new(substitute_proc(body, value, var)),
        },
    };
    Process::new(kind, p.span)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unfold_rec applied to a non-recursive process")]
pub struct NotRecursive;

/// One-step unfolding `rec X. P  ->  P{rec X. P / X}`.
pub fn unfold_rec(p: &Process) -> Result<Process, NotRecursive> {
    match &p.kind {
        ProcessKind::Rec { var, body } => Ok(substitute_proc(body, p, var)),
        _ => Err(NotRecursive),
    }
}

/// Flatten top-level parallel composition, dropping idle components.
pub fn parallel_atoms(p: &Process) -> Vec<Process> {
    let mut out = Vec::new();
    push_atoms(p, &mut out);
    out
}

pub(crate) fn push_atoms(p: &Process, out: &mut Vec<Process>) {
    match &p.kind {
        ProcessKind::Idle => {}
        ProcessKind::Parallel(l, r) => {
            push_atoms(l, out);
            push_atoms(r, out);
        }
        _ => out.push(p.clone()),
    }
}

/// Alpha-equivalence of processes. Type annotations are compared with
/// [`crate::types::type_equal`].
pub fn alpha_eq(p: &Process, q: &Process) -> bool {
    AlphaEq::default().eq(p, q)
}

#[derive(Default)]
struct AlphaEq {
    // Pairs of binders currently in scope, innermost last.
    names: Vec<(Name, Name)>,
    procs: Vec<(ProcVar, ProcVar)>,
}

impl AlphaEq {
    fn name_eq(&self, a: &Name, b: &Name) -> bool {
        for (x, y) in self.names.iter().rev() {
            if x == a || y == b {
                return x == a && y == b;
            }
        }
        a == b
    }

    fn proc_eq(&self, a: &ProcVar, b: &ProcVar) -> bool {
        for (x, y) in self.procs.iter().rev() {
            if x == a || y == b {
                return x == a && y == b;
            }
        }
        a == b
    }

    fn ty_eq(a: &Option<Type>, b: &Option<Type>) -> bool {
        match (a, b) {
            (None, None) => true,
            (Some(a), Some(b)) => crate::types::type_equal(a, b),
            _ => false,
        }
    }

    fn eq(&mut self, p: &Process, q: &Process) -> bool {
        use ProcessKind as K;
        match (&p.kind, &q.kind) {
            (K::Idle, K::Idle) => true,
            (K::Var(x), K::Var(y)) => self.proc_eq(x, y),
            (K::Close(u), K::Close(v)) => self.name_eq(u, v),
            (
                K::Open { left: l1, right: r1, annotation: a1, body: b1 },
                K::Open { left: l2, right: r2, annotation: a2, body: b2 },
            ) => {
                if !Self::ty_eq(a1, a2) {
                    return false;
                }
                self.names.push((Name::Loc(l1.clone()), Name::Loc(l2.clone())));
                self.names.push((Name::Loc(r1.clone()), Name::Loc(r2.clone())));
                let ok = self.eq(b1, b2);
                self.names.truncate(self.names.len() - 2);
                ok
            }
            (
                K::Send { subject: s1, tag: t1, instantiation: i1, argument: a1, body: b1 },
                K::Send { subject: s2, tag: t2, instantiation: i2, argument: a2, body: b2 },
            ) => {
                t1 == t2
                    && self.name_eq(s1, s2)
                    && Self::ty_eq(i1, i2)
                    && match (a1, a2) {
                        (None, None) => true,
                        (Some(a), Some(b)) => self.name_eq(a, b),
                        _ => false,
                    }
                    && self.eq(b1, b2)
            }
            (K::Receive { subject: s1, branches: bs1 }, K::Receive { subject: s2, branches: bs2 }) => {
                if !self.name_eq(s1, s2) || bs1.len() != bs2.len() {
                    return false;
                }
                bs1.iter().all(|b1| {
                    let Some(b2) = bs2.iter().find(|b| b.tag == b1.tag) else {
                        return false;
                    };
                    match (&b1.binder, &b2.binder) {
                        (None, None) => self.eq(&b1.body, &b2.body),
                        (Some(x), Some(y)) => {
                            self.names.push((Name::Var(x.clone()), Name::Var(y.clone())));
                            let ok = self.eq(&b1.body, &b2.body);
                            self.names.pop();
                            ok
                        }
                        _ => false,
                    }
                })
            }
            (K::Choice(l1, r1), K::Choice(l2, r2)) | (K::Parallel(l1, r1), K::Parallel(l2, r2)) => {
                self.eq(l1, l2) && self.eq(r1, r2)
            }
            (K::Rec { var: x, body: b1 }, K::Rec { var: y, body: b2 }) => {
                self.procs.push((x.clone(), y.clone()));
                let ok = self.eq(b1, b2);
                self.procs.pop();
                ok
            }
            _ => false,
        }
    }
}

/// A queued message `m(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub tag: Tag,
    pub argument: Option<Ident>,
}

/// Heap object `a ↦ [b, q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub peer: Ident,
    pub queue: VecDeque<Message>,
}

/// Finite map from locations to endpoints. Disjointness of composed heaps
/// holds by construction of the map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Heap {
    cells: BTreeMap<Ident, Endpoint>,
}

impl Heap {
    pub fn new() -> Self {
        Heap::default()
    }

    /// Allocate a channel: two endpoints referring to each other with empty
    /// queues. Returns false (and leaves the heap unchanged) if either
    /// location is already allocated.
    pub fn open(&mut self, a: Ident, b: Ident) -> bool {
        if a == b || self.cells.contains_key(&a) || self.cells.contains_key(&b) {
            return false;
        }
        self.cells.insert(a.clone(), Endpoint { peer: b.clone(), queue: VecDeque::new() });
        self.cells.insert(b, Endpoint { peer: a, queue: VecDeque::new() });
        true
    }

    /// Insert a raw endpoint record; used to build heaps for checking.
    pub fn insert(&mut self, at: Ident, endpoint: Endpoint) -> Option<Endpoint> {
        self.cells.insert(at, endpoint)
    }

    pub fn get(&self, at: &Ident) -> Option<&Endpoint> {
        self.cells.get(at)
    }

    pub fn get_mut(&mut self, at: &Ident) -> Option<&mut Endpoint> {
        self.cells.get_mut(at)
    }

    pub fn contains(&self, at: &Ident) -> bool {
        self.cells.contains_key(at)
    }

    pub fn domain(&self) -> BTreeSet<Ident> {
        self.cells.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Endpoint)> {
        self.cells.iter()
    }
}

/// A system `(μ; P)`.
#[derive(Clone, Debug)]
pub struct System {
    pub heap: Heap,
    pub process: Process,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc(s: &str) -> Name {
        Name::Loc(Ident::new(s))
    }
    fn var(s: &str) -> Name {
        Name::Var(Ident::new(s))
    }
    fn send(u: Name, m: &str, v: Option<Name>, body: Process) -> Process {
        Process::new(
            ProcessKind::Send {
                subject: u,
                tag: Tag::new(m),
                instantiation: None,
                argument: v,
                body: Box::new(body),
            },
            Span::default(),
        )
    }
    fn recv(u: Name, branches: Vec<(&str, Option<&str>, Process)>) -> Process {
        Process::new(
            ProcessKind::Receive {
                subject: u,
                branches: branches
                    .into_iter()
                    .map(|(m, x, body)| ReceiveBranch {
                        tag: Tag::new(m),
                        binder: x.map(Ident::new),
                        body,
                        span: Span::default(),
                    })
                    .collect(),
            },
            Span::default(),
        )
    }

    #[test]
    fn free_names_examples() {
        assert!(free_names(&Process::idle()).is_empty());
        assert_eq!(free_names(&Process::close(var("u"))), [var("u")].into());
        let p = Process::new(
            ProcessKind::Open {
                left: Ident::new("a"),
                right: Ident::new("b"),
                annotation: None,
                body: Box::new(send(loc("a"), "m", Some(loc("c")), Process::idle())),
            },
            Span::default(),
        );
        assert_eq!(free_names(&p), [loc("c")].into());
    }

    #[test]
    fn namespaces_are_disjoint() {
        assert_ne!(loc("a"), var("a"));
        let p = Process::close(loc("a"));
        assert!(alpha_eq(&substitute_name(&p, &loc("z"), &Ident::new("a")), &p));
    }

    #[test]
    fn substitution_examples() {
        let p = send(var("x"), "m", Some(var("y")), Process::idle());
        let got = substitute_name(&p, &loc("a"), &Ident::new("x"));
        assert!(alpha_eq(&got, &send(loc("a"), "m", Some(var("y")), Process::idle())));
        let untouched = substitute_name(&p, &loc("a"), &Ident::new("z"));
        assert!(alpha_eq(&untouched, &p));
        // y is bound by the receive, so nothing changes
        let q = recv(var("x"), vec![("m", Some("y"), send(var("y"), "m", Some(var("x")), Process::idle()))]);
        assert!(alpha_eq(&substitute_name(&q, &loc("a"), &Ident::new("y")), &q));
    }

    #[test]
    fn unfold_examples() {
        let x = ProcVar(Ident::new("X"));
        let c = var("c");
        let unused = Process::new(
            ProcessKind::Rec { var: x.clone(), body: Box::new(recv(c.clone(), vec![("free", None, Process::close(c.clone()))])) },
            Span::default(),
        );
        assert!(alpha_eq(&unfold_rec(&unused).unwrap(), &recv(c.clone(), vec![("free", None, Process::close(c.clone()))])));

        let loop_ = Process::new(
            ProcessKind::Rec { var: x.clone(), body: Box::new(Process::new(ProcessKind::Var(x.clone()), Span::default())) },
            Span::default(),
        );
        assert!(alpha_eq(&unfold_rec(&loop_).unwrap(), &loop_));

        let cell_body = recv(
            c.clone(),
            vec![
                ("set", Some("x"), send(c.clone(), "get", Some(var("x")), Process::new(ProcessKind::Var(x.clone()), Span::default()))),
                ("free", None, Process::close(c.clone())),
            ],
        );
        let cell = Process::new(ProcessKind::Rec { var: x.clone(), body: Box::new(cell_body.clone()) }, Span::default());
        let unfolded = unfold_rec(&cell).unwrap();
        let expected = recv(
            c.clone(),
            vec![
                ("set", Some("x"), send(c.clone(), "get", Some(var("x")), cell.clone())),
                ("free", None, Process::close(c.clone())),
            ],
        );
        assert!(alpha_eq(&unfolded, &expected));
        assert_eq!(free_names(&unfolded), free_names(&cell));
        assert_eq!(unfold_rec(&Process::idle()).unwrap_err(), NotRecursive);
    }

    #[test]
    fn atoms_examples() {
        let p = Process::close(loc("p"));
        let q = Process::close(loc("q"));
        let t = Process::par(Process::par(p.clone(), Process::idle()), q.clone());
        let atoms = parallel_atoms(&t);
        assert_eq!(atoms.len(), 2);
        assert!(alpha_eq(&atoms[0], &p) && alpha_eq(&atoms[1], &q));
        assert!(parallel_atoms(&Process::idle()).is_empty());
        let abc = Process::par(Process::close(loc("a")), Process::par(Process::close(loc("b")), Process::close(loc("c"))));
        assert_eq!(parallel_atoms(&abc).len(), 3);
    }

    #[test]
    fn heap_open_rejects_reuse() {
        let mut h = Heap::new();
        assert!(h.open(Ident::new("a"), Ident::new("b")));
        assert!(!h.open(Ident::new("a"), Ident::new("c")));
        assert_eq!(h.len(), 2);
        assert_eq!(h.get(&Ident::new("a")).unwrap().peer, Ident::new("b"));
    }

    #[test]
    fn heap_idents_display() {
        assert_eq!(Ident::heap(Arc::from("f"), 1).to_string(), "f");
        assert_eq!(Ident::heap(Arc::from("f"), 2).to_string(), "f@2");
        assert_eq!(Ident::with_index("x", 3).to_string(), "x'3");
        assert_ne!(Ident::heap(Arc::from("f"), 1), Ident::new("f"));
    }
}
