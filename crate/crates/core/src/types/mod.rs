//! Types and endpoint types, with the decision procedures over them.
//!
//! Terms are locally nameless: binders (`rec` and the quantifier of each
//! message branch) are referenced by de Bruijn index, while variables that
//! live in a bound environment are [`TyVar`]s with globally fresh ids. Binder
//! names survive only as printing hints and do not take part in equality or
//! hashing, so derived `Eq`/`Hash` is alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::syntax::Tag;

mod canon;
mod dual;
mod equal;
mod head;
mod subtype;
mod tail;
mod weight;
mod wf;

pub use dual::{dual, DualError};
pub use equal::{try_type_equal, type_equal};
pub use head::{head_normal, HeadError, HeadForm};
pub use subtype::{subtype, Subtyping};
pub use tail::{tail, tail_with, QueueSpec, TailError};
pub use weight::{weight, weight_with, Weight};
pub use wf::{check_well_formed, well_formed, WfError};

pub(crate) use canon::canon_key;

/// Default number of states a decision procedure may visit.
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("step budget of {0} states exceeded")]
pub struct BudgetExceeded(pub usize);

/// Display name of a binder. Ignored by `Eq`, `Ord` and `Hash`.
#[derive(Clone, Debug)]
pub struct Hint(pub Arc<str>);

impl Hint {
    pub fn new(s: &str) -> Self {
        Hint(Arc::from(s))
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Hint {}
impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}
impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Hint {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

/// A type variable held in a bound environment.
#[derive(Clone, Debug)]
pub struct TyVar {
    id: u64,
    hint: Hint,
}

static NEXT_TYVAR: AtomicU64 = AtomicU64::new(1 << 32);

impl TyVar {
    pub fn fresh(hint: &str) -> Self {
        TyVar { id: NEXT_TYVAR.fetch_add(1, Ordering::Relaxed), hint: Hint::new(hint) }
    }

    pub(crate) fn canonical(id: u64) -> Self {
        TyVar { id, hint: Hint::new("") }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn hint(&self) -> &str {
        self.hint.as_str()
    }
}

impl PartialEq for TyVar {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for TyVar {}
impl Hash for TyVar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}
impl PartialOrd for TyVar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for TyVar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

/// `+{...}` (output, internal choice) or `&{...}` (input, external choice).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Internal,
    External,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Internal => Polarity::External,
            Polarity::External => Polarity::Internal,
        }
    }
}

/// One branch `m<α <: bound>(payload). cont`. The quantified variable is
/// de Bruijn index 0 inside `payload` and `cont`; `bound` lives outside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub tag: Tag,
    pub var: Hint,
    pub bound: Type,
    pub payload: Option<Type>,
    pub cont: Type,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Top,
    Base(Arc<str>),
    End,
    /// de Bruijn index of an enclosing binder.
    Bound(usize),
    /// Variable bound in the surrounding `BoundEnv`.
    Free(TyVar),
    Choice(Polarity, Arc<[Branch]>),
    Rec(Hint, Arc<Type>),
}

impl Type {
    pub fn choice(pol: Polarity, branches: Vec<Branch>) -> Type {
        Type::Choice(pol, branches.into())
    }

    pub fn rec(hint: &str, body: Type) -> Type {
        Type::Rec(Hint::new(hint), Arc::new(body))
    }

    /// Endpoint types are everything except `Top` and base types.
    pub fn is_endpoint(&self) -> bool {
        !matches!(self, Type::Top | Type::Base(_))
    }

    /// Shift indices `>= cutoff` by `by`.
    pub fn shift(&self, by: isize, cutoff: usize) -> Type {
        if by == 0 {
            return self.clone();
        }
        match self {
            Type::Bound(i) if *i >= cutoff => {
                Type::Bound(usize::try_from(*i as isize + by).expect("negative de Bruijn index"))
            }
            Type::Top | Type::Base(_) | Type::End | Type::Bound(_) | Type::Free(_) => self.clone(),
            Type::Rec(h, body) => Type::Rec(h.clone(), Arc::new(body.shift(by, cutoff + 1))),
            Type::Choice(pol, bs) => Type::Choice(
                *pol,
                bs.iter()
                    .map(|b| Branch {
                        tag: b.tag.clone(),
                        var: b.var.clone(),
                        bound: b.bound.shift(by, cutoff),
                        payload: b.payload.as_ref().map(|p| p.shift(by, cutoff + 1)),
                        cont: b.cont.shift(by, cutoff + 1),
                    })
                    .collect(),
            ),
        }
    }

    /// Substitute `arg` for index `k`, lowering the indices above it.
    fn instantiate_at(&self, k: usize, arg: &Type) -> Type {
        match self {
            Type::Bound(i) if *i == k => arg.shift(k as isize, 0),
            Type::Bound(i) if *i > k => Type::Bound(i - 1),
            Type::Top | Type::Base(_) | Type::End | Type::Bound(_) | Type::Free(_) => self.clone(),
            Type::Rec(h, body) => Type::Rec(h.clone(), Arc::new(body.instantiate_at(k + 1, arg))),
            Type::Choice(pol, bs) => Type::Choice(
                *pol,
                bs.iter()
                    .map(|b| Branch {
                        tag: b.tag.clone(),
                        var: b.var.clone(),
                        bound: b.bound.instantiate_at(k, arg),
                        payload: b.payload.as_ref().map(|p| p.instantiate_at(k + 1, arg)),
                        cont: b.cont.instantiate_at(k + 1, arg),
                    })
                    .collect(),
            ),
        }
    }

    /// Open the innermost binder of a body with `arg`.
    pub fn instantiate(&self, arg: &Type) -> Type {
        self.instantiate_at(0, arg)
    }

    /// One-step unfolding `rec a. T  ->  T{rec a. T / a}`; other terms are
    /// returned unchanged.
    pub fn unfold(&self) -> Type {
        match self {
            Type::Rec(_, body) => body.instantiate(self),
            _ => self.clone(),
        }
    }

    /// Unfold until the head is not a `rec`. Contractive types need at most
    /// as many steps as there are nested `rec`s at the head.
    pub fn unfold_all(&self) -> Type {
        let mut t = self.clone();
        let mut guard = 0usize;
        while let Type::Rec(..) = t {
            t = t.unfold();
            guard += 1;
            if guard > 10_000 {
                break;
            }
        }
        t
    }

    /// Does index `k` occur (relative to this term)?
    pub fn mentions_bound(&self, k: usize) -> bool {
        match self {
            Type::Bound(i) => *i == k,
            Type::Top | Type::Base(_) | Type::End | Type::Free(_) => false,
            Type::Rec(_, body) => body.mentions_bound(k + 1),
            Type::Choice(_, bs) => bs.iter().any(|b| {
                b.bound.mentions_bound(k)
                    || b.payload.as_ref().is_some_and(|p| p.mentions_bound(k + 1))
                    || b.cont.mentions_bound(k + 1)
            }),
        }
    }

    /// True if no de Bruijn index escapes the term.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Type, depth: usize) -> bool {
            match t {
                Type::Bound(i) => *i < depth,
                Type::Top | Type::Base(_) | Type::End | Type::Free(_) => true,
                Type::Rec(_, body) => go(body, depth + 1),
                Type::Choice(_, bs) => bs.iter().all(|b| {
                    go(&b.bound, depth)
                        && b.payload.as_ref().is_none_or(|p| go(p, depth + 1))
                        && go(&b.cont, depth + 1)
                }),
            }
        }
        go(self, 0)
    }

    /// Variables of the bound environment occurring in the term.
    pub fn free_vars(&self) -> BTreeSet<TyVar> {
        let mut out = BTreeSet::new();
        self.visit_free(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    pub(crate) fn visit_free(&self, f: &mut impl FnMut(&TyVar)) {
        match self {
            Type::Free(v) => f(v),
            Type::Top | Type::Base(_) | Type::End | Type::Bound(_) => {}
            Type::Rec(_, body) => body.visit_free(f),
            Type::Choice(_, bs) => {
                for b in bs.iter() {
                    b.bound.visit_free(f);
                    if let Some(p) = &b.payload {
                        p.visit_free(f);
                    }
                    b.cont.visit_free(f);
                }
            }
        }
    }

    /// Rebuild the term replacing every `Free` variable via `f`.
    pub(crate) fn map_free(&self, f: &mut impl FnMut(&TyVar) -> Type) -> Type {
        self.map_free_at(0, f)
    }

    fn map_free_at(&self, depth: usize, f: &mut impl FnMut(&TyVar) -> Type) -> Type {
        match self {
            Type::Free(v) => f(v).shift(depth as isize, 0),
            Type::Top | Type::Base(_) | Type::End | Type::Bound(_) => self.clone(),
            Type::Rec(h, body) => Type::Rec(h.clone(), Arc::new(body.map_free_at(depth + 1, f))),
            Type::Choice(pol, bs) => Type::Choice(
                *pol,
                bs.iter()
                    .map(|b| Branch {
                        tag: b.tag.clone(),
                        var: b.var.clone(),
                        bound: b.bound.map_free_at(depth, f),
                        payload: b.payload.as_ref().map(|p| p.map_free_at(depth + 1, f)),
                        cont: b.cont.map_free_at(depth + 1, f),
                    })
                    .collect(),
            ),
        }
    }

    /// Tags offered by a choice, in declaration order.
    pub fn tags(&self) -> Vec<Tag> {
        match self {
            Type::Choice(_, bs) => bs.iter().map(|b| b.tag.clone()).collect(),
            _ => Vec::new(),
        }
    }
}

impl Branch {
    pub fn carries_argument(&self) -> bool {
        self.payload.is_some()
    }

    /// Whether the quantified variable is used at all.
    pub fn binder_used(&self) -> bool {
        self.payload.as_ref().is_some_and(|p| p.mentions_bound(0)) || self.cont.mentions_bound(0)
    }

    /// Payload and continuation with the quantified variable replaced.
    pub fn open_with(&self, arg: &Type) -> (Option<Type>, Type) {
        (self.payload.as_ref().map(|p| p.instantiate(arg)), self.cont.instantiate(arg))
    }
}

/// Replace every occurrence of the environment variable `var` by `arg`.
pub fn type_subst(t: &Type, arg: &Type, var: &TyVar) -> Type {
    t.map_free(&mut |v| if v == var { arg.clone() } else { Type::Free(v.clone()) })
}

/// One constraint `α <: bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundEntry {
    pub var: TyVar,
    pub bound: Type,
    /// Set when the variable was introduced by receiving a message whose
    /// argument has exactly the variable's type. The sender instantiated
    /// it with a type it had to prove finite-weight, so the checker may
    /// treat it as finite-weight as well.
    pub witnessed: bool,
}

/// Ordered bound environment; lookup returns the rightmost entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundEnv {
    entries: Vec<BoundEntry>,
}

impl BoundEnv {
    pub fn new() -> Self {
        BoundEnv::default()
    }

    pub fn push(&mut self, var: TyVar, bound: Type) {
        self.entries.push(BoundEntry { var, bound, witnessed: false });
    }

    pub fn push_entry(&mut self, entry: BoundEntry) {
        self.entries.push(entry);
    }

    pub fn extended(&self, var: TyVar, bound: Type) -> BoundEnv {
        let mut out = self.clone();
        out.push(var, bound);
        out
    }

    pub fn lookup(&self, var: &TyVar) -> Option<&BoundEntry> {
        self.entries.iter().rev().find(|e| &e.var == var)
    }

    pub fn bound_of(&self, var: &TyVar) -> Option<&Type> {
        self.lookup(var).map(|e| &e.bound)
    }

    pub fn contains(&self, var: &TyVar) -> bool {
        self.lookup(var).is_some()
    }

    pub fn entries(&self) -> &[BoundEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Variables reachable from `roots` through bounds, in first-visit order.
    pub fn relevant(&self, roots: impl IntoIterator<Item = TyVar>) -> Vec<TyVar> {
        let mut seen: Vec<TyVar> = Vec::new();
        let mut queue: Vec<TyVar> = roots.into_iter().collect();
        queue.reverse();
        while let Some(v) = queue.pop() {
            if seen.contains(&v) {
                continue;
            }
            if let Some(e) = self.lookup(&v) {
                let mut next: Vec<TyVar> = e.bound.free_vars().into_iter().collect();
                next.reverse();
                queue.extend(next);
            }
            seen.push(v);
        }
        seen
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::surface::print_type(self))
    }
}
