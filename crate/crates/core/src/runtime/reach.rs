use std::collections::BTreeSet;

use crate::syntax::{Heap, Ident};

/// Locations reachable from `roots` by following queued message arguments.
/// Peer references are not edges. Roots are included even when not
/// allocated, so the caller can spot references to missing cells.
pub fn reachable<'a>(roots: impl IntoIterator<Item = &'a Ident>, heap: &Heap) -> BTreeSet<Ident> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Ident> = roots.into_iter().cloned().collect();
    while let Some(a) = stack.pop() {
        if !seen.insert(a.clone()) {
            continue;
        }
        if let Some(ep) = heap.get(&a) {
            stack.extend(ep.queue.iter().filter_map(|m| m.argument.clone()));
        }
    }
    seen
}
