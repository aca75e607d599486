use std::collections::BTreeSet;

use crate::runtime::reachable;
use crate::syntax::{Heap, Ident, Name, Span, System};
use crate::types::{dual, tail_with, BoundEnv, QueueSpec, Subtyping};

use super::{check_process_with, CheckOptions, Derivation, ProcEnv, TypeEnv, TypeError};

/// A violated heap condition, with the locations involved.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HeapError {
    #[error("peer of `{at}` is `{peer}`, which is not allocated or does not point back")]
    Peer { at: Ident, peer: Ident },
    #[error("`{a}` and `{b}` both have nonempty queues")]
    BothQueued { a: Ident, b: Ident },
    #[error("no type for location `{at}`")]
    Untyped { at: Ident },
    #[error("types of `{a}` and `{b}` are not dual modulo subtyping: {detail}")]
    NotDual { a: Ident, b: Ident, detail: String },
    #[error("heap domain mismatch: {detail} ({})", list(.locations))]
    Domain { locations: Vec<Ident>, detail: &'static str },
    #[error("`{at}` is reachable from both `{a}` and `{b}`")]
    Shared { a: Ident, b: Ident, at: Ident },
    #[error("{0}")]
    Budget(String),
}

fn list(ls: &[Ident]) -> String {
    ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
}

impl HeapError {
    /// Which of the four conditions failed; 0 for an exhausted budget.
    pub fn condition(&self) -> u8 {
        match self {
            HeapError::Peer { .. } | HeapError::BothQueued { .. } => 1,
            HeapError::Untyped { .. } | HeapError::NotDual { .. } => 2,
            HeapError::Domain { .. } => 3,
            HeapError::Shared { .. } => 4,
            HeapError::Budget(_) => 0,
        }
    }
}

impl From<HeapError> for TypeError {
    fn from(e: HeapError) -> Self {
        let rule = match e.condition() {
            0 => "budget".to_string(),
            n => format!("heap({n})"),
        };
        TypeError::new(&rule, Span::default(), e.to_string())
    }
}

/// `Γ0; Γ ⊢ μ`. `Γ0` types the locations that sit in queues, `Γ` the roots
/// owned by the process.
pub fn check_heap(gamma0: &TypeEnv, gamma: &TypeEnv, heap: &Heap, opts: &CheckOptions) -> Result<(), HeapError> {
    for (a, ep) in heap.iter() {
        let b = &ep.peer;
        match heap.get(b) {
            Some(peer) if &peer.peer == a => {
                if !ep.queue.is_empty() && !peer.queue.is_empty() {
                    return Err(HeapError::BothQueued { a: a.clone(), b: b.clone() });
                }
            }
            _ => return Err(HeapError::Peer { at: a.clone(), peer: b.clone() }),
        }
    }

    let all = gamma0.union(gamma);
    let type_of = |a: &Ident| all.get(&Name::Loc(a.clone())).cloned().ok_or_else(|| HeapError::Untyped { at: a.clone() });
    let empty = BoundEnv::new();
    let mut sub = Subtyping::new(opts.budget);
    for (a, ep) in heap.iter() {
        let b = &ep.peer;
        if !heap.get(b).is_some_and(|p| p.queue.is_empty()) {
            continue;
        }
        let (ta, tb) = (type_of(a)?, type_of(b)?);
        let specs = ep
            .queue
            .iter()
            .map(|m| Ok((m.tag.clone(), m.argument.as_ref().map(&type_of).transpose()?)))
            .collect::<Result<Vec<QueueSpec>, HeapError>>()?;
        let not_dual = |detail: String| HeapError::NotDual { a: a.clone(), b: b.clone(), detail };
        let residual = if specs.is_empty() {
            ta
        } else {
            tail_with(&empty, &ta, &specs, opts.budget).map_err(|e| not_dual(e.to_string()))?
        };
        let d = dual(&residual).map_err(|e| not_dual(e.to_string()))?;
        match sub.check(&empty, &d, &tb) {
            Ok(true) => {}
            Ok(false) => return Err(not_dual(format!("dual of {residual} is not a subtype of {tb}"))),
            Err(e) => return Err(HeapError::Budget(e.to_string())),
        }
    }

    let dom = heap.domain();
    let typed: BTreeSet<Ident> = all.names().iter().map(|n| n.ident().clone()).collect();
    let roots: Vec<Ident> = gamma.names().iter().map(|n| n.ident().clone()).collect();
    let reach = reachable(&roots, heap);
    for (locations, detail) in [
        (dom.difference(&typed).cloned().collect::<Vec<_>>(), "allocated but untyped"),
        (typed.difference(&dom).cloned().collect(), "typed but not allocated"),
        (dom.difference(&reach).cloned().collect(), "allocated but unreachable from the roots"),
    ] {
        if !locations.is_empty() {
            return Err(HeapError::Domain { locations, detail });
        }
    }

    let per_root: Vec<BTreeSet<Ident>> = roots.iter().map(|r| reachable([r], heap)).collect();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if let Some(at) = per_root[i].intersection(&per_root[j]).next() {
                return Err(HeapError::Shared { a: roots[i].clone(), b: roots[j].clone(), at: at.clone() });
            }
        }
    }
    Ok(())
}

/// `Γ0; Γ ⊢ (μ; P)`.
pub fn check_system(gamma0: &TypeEnv, gamma: &TypeEnv, sys: &System, opts: &CheckOptions) -> Result<Derivation, TypeError> {
    check_heap(gamma0, gamma, &sys.heap, opts)?;
    check_process_with(opts, &ProcEnv::new(), &BoundEnv::new(), gamma, &sys.process)
}
