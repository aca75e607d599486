//! Well-formedness `I, O ⊢ t`: quantified variables introduced by a message
//! branch may occur only in payloads and bounds of later prefixes, never as a
//! continuation; recursion must be guarded.

use std::collections::BTreeSet;

use super::{TyVar, Type};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WfError {
    #[error("type variable `{0}` may only occur inside a later message prefix")]
    InnerVariable(String),
    #[error("type variable `{0}` is not in scope")]
    Unbound(String),
    #[error("recursion variable `{0}` is not guarded by a message prefix")]
    Unguarded(String),
    #[error("`{0}` is not an endpoint type but occurs where one is required")]
    NotEndpoint(String),
    #[error("duplicate message tag `{0}` in a choice")]
    DuplicateTag(String),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Inner,
    Outer,
}

#[derive(Clone)]
struct Scope {
    // de Bruijn binders, innermost last: (status, display name)
    stack: Vec<(Status, String)>,
    inner: BTreeSet<TyVar>,
    outer: BTreeSet<TyVar>,
}

impl Scope {
    /// `∅, I ∪ O`: used for bounds and payloads.
    fn flattened(&self) -> Scope {
        let mut outer = self.outer.clone();
        outer.extend(self.inner.iter().cloned());
        Scope {
            stack: self.stack.iter().map(|(_, n)| (Status::Outer, n.clone())).collect(),
            inner: BTreeSet::new(),
            outer,
        }
    }

    fn pushed(&self, status: Status, name: &str) -> Scope {
        let mut s = self.clone();
        s.stack.push((status, name.to_string()));
        s
    }
}

pub fn check_well_formed(t: &Type, inner: &BTreeSet<TyVar>, outer: &BTreeSet<TyVar>) -> bool {
    well_formed(t, inner, outer).is_ok()
}

/// Like [`check_well_formed`] but names the offending occurrence.
pub fn well_formed(t: &Type, inner: &BTreeSet<TyVar>, outer: &BTreeSet<TyVar>) -> Result<(), WfError> {
    let scope = Scope { stack: Vec::new(), inner: inner.clone(), outer: outer.clone() };
    check(t, &scope, false)
}

fn check(t: &Type, scope: &Scope, endpoint: bool) -> Result<(), WfError> {
    match t {
        Type::End => Ok(()),
        Type::Top if endpoint => Err(WfError::NotEndpoint("Top".into())),
        Type::Base(b) if endpoint => Err(WfError::NotEndpoint(b.to_string())),
        Type::Top | Type::Base(_) => Ok(()),
        Type::Bound(i) => {
            let Some(pos) = scope.stack.len().checked_sub(i + 1) else {
                return Err(WfError::Unbound(format!("#{i}")));
            };
            match &scope.stack[pos] {
                (Status::Outer, _) => Ok(()),
                (Status::Inner, name) => Err(WfError::InnerVariable(name.clone())),
            }
        }
        Type::Free(v) => {
            if scope.inner.contains(v) {
                Err(WfError::InnerVariable(v.hint().to_string()))
            } else if scope.outer.contains(v) {
                Ok(())
            } else {
                Err(WfError::Unbound(v.hint().to_string()))
            }
        }
        Type::Rec(hint, body) => {
            guarded(body, 0, hint.as_str())?;
            check(body, &scope.pushed(Status::Outer, hint.as_str()), true)
        }
        Type::Choice(_, branches) => {
            let mut seen = BTreeSet::new();
            for b in branches.iter() {
                if !seen.insert(b.tag.clone()) {
                    return Err(WfError::DuplicateTag(b.tag.to_string()));
                }
                let flat = scope.flattened();
                check(&b.bound, &flat, false)?;
                if let Some(p) = &b.payload {
                    check(p, &flat.pushed(Status::Outer, b.var.as_str()), false)?;
                }
                check(&b.cont, &scope.pushed(Status::Inner, b.var.as_str()), true)?;
            }
            Ok(())
        }
    }
}

/// Reject `rec a. a` and `rec a. rec b. a`: the body, after any nested
/// `rec`s, must not be one of those recursion variables.
fn guarded(body: &Type, depth: usize, name: &str) -> Result<(), WfError> {
    match body {
        Type::Bound(i) if *i <= depth => Err(WfError::Unguarded(name.to_string())),
        Type::Rec(_, inner) => guarded(inner, depth + 1, name),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    fn closed(t: &Type) -> bool {
        check_well_formed(t, &BTreeSet::new(), &BTreeSet::new())
    }

    #[test]
    fn axioms() {
        assert!(closed(&Type::End));
        assert!(closed(&Type::Top));
    }

    #[test]
    fn quantified_variable_as_continuation_is_ill_formed() {
        // +{ m<a<:t>(s). a }
        let t = output(vec![qbr("m", Type::End, Some(Type::End), Type::Bound(0))]);
        assert!(matches!(
            well_formed(&t, &BTreeSet::new(), &BTreeSet::new()),
            Err(WfError::InnerVariable(_))
        ));
        // +{ m<a>(a). &{ m(a). end } } is fine
        let ok = output(vec![qbr(
            "m",
            Type::Top,
            Some(Type::Bound(0)),
            input(vec![br("m", Some(Type::Bound(0)), Type::End)]),
        )]);
        assert!(closed(&ok));
    }

    #[test]
    fn recursive_stream_is_well_formed() {
        // rec a. &{ arg(a). end }
        let s = Type::rec("a", input(vec![qbr("arg", Type::Top, Some(Type::Bound(1)), Type::End)]));
        assert!(closed(&s));
    }

    #[test]
    fn contractivity_and_scope() {
        assert!(!closed(&Type::rec("a", Type::Bound(0))));
        assert!(!closed(&Type::rec("a", Type::rec("b", Type::Bound(1)))));
        assert!(!closed(&Type::Bound(0)));
        let v = TyVar::fresh("v");
        assert!(!closed(&Type::Free(v.clone())));
        assert!(check_well_formed(&Type::Free(v.clone()), &BTreeSet::new(), &[v.clone()].into()));
        assert!(!check_well_formed(&Type::Free(v.clone()), &[v.clone()].into(), &[v].into()));
        assert!(!closed(&output(vec![br("m", None, Type::Top)])));
    }
}
