//! Canonical keys for memo tables.
//!
//! Decision procedures open binders with fresh variables, so the same
//! configuration reappears under different variable ids. A key renames the
//! variables in order of first occurrence and records only the part of the
//! bound environment reachable from the terms.

use std::collections::HashMap;

use super::{BoundEnv, TyVar, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct CanonKey {
    terms: Vec<Type>,
    bounds: Vec<Option<(Type, bool)>>,
}

pub(crate) fn canon_key(delta: &BoundEnv, terms: &[&Type]) -> CanonKey {
    let mut roots = Vec::new();
    for t in terms {
        t.visit_free(&mut |v| {
            if !roots.contains(v) {
                roots.push(v.clone());
            }
        });
    }
    let order = delta.relevant(roots);
    let index: HashMap<&TyVar, u64> = order.iter().enumerate().map(|(i, v)| (v, i as u64)).collect();
    let mut rename = |v: &TyVar| Type::Free(TyVar::canonical(index[v]));
    let terms = terms.iter().map(|t| t.map_free(&mut rename)).collect();
    let bounds = order
        .iter()
        .map(|v| delta.lookup(v).map(|e| (e.bound.map_free(&mut rename), e.witnessed)))
        .collect();
    CanonKey { terms, bounds }
}
