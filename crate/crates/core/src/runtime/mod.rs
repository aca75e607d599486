//! Reduction semantics over a mutable heap, with a seeded scheduler and a
//! well-behavedness monitor.

mod machine;
mod monitor;
mod reach;
mod run;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::syntax::{Heap, Ident, Tag};

pub use machine::{enabled, step, StepError};
pub use monitor::{half_duplex, monitor};
pub use reach::reachable;
pub use run::{run, run_observed, run_seeds, run_seeds_seq, RunOptions, RunOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A reducible atom of the current process. Indices refer to
/// [`crate::syntax::parallel_atoms`] of the state it was enumerated from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Redex {
    Open(usize),
    Send(usize),
    Receive(usize, Tag),
    Choice(usize, Side),
    Rec(usize),
}

impl Redex {
    pub fn atom(&self) -> usize {
        match self {
            Redex::Open(i) | Redex::Send(i) | Redex::Receive(i, _) | Redex::Choice(i, _) | Redex::Rec(i) => *i,
        }
    }

    pub fn rule(&self) -> &'static str {
        match self {
            Redex::Open(_) => "R-Open",
            Redex::Send(_) => "R-Send",
            Redex::Receive(..) => "R-Receive",
            Redex::Choice(_, Side::Left) => "R-Choice-L",
            Redex::Choice(_, Side::Right) => "R-Choice-R",
            Redex::Rec(_) => "R-Rec",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    Leak,
    IsolationViolation,
    Fault,
    CommunicationError,
    Deadlock,
    Terminated,
    BudgetExhausted,
}

impl Verdict {
    /// Leak, fault, isolation violation or communication error.
    pub fn is_violation(self) -> bool {
        matches!(self, Verdict::Leak | Verdict::IsolationViolation | Verdict::Fault | Verdict::CommunicationError)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Ok => "ok",
            Verdict::Leak => "leak",
            Verdict::IsolationViolation => "isolation-violation",
            Verdict::Fault => "fault",
            Verdict::CommunicationError => "communication-error",
            Verdict::Deadlock => "deadlock",
            Verdict::Terminated => "terminated",
            Verdict::BudgetExhausted => "budget-exhausted",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonitorReport {
    pub verdict: Verdict,
    /// Locations or atoms involved; nonempty unless the verdict is `ok`.
    pub witness: Vec<String>,
    pub step: u64,
}

impl MonitorReport {
    pub fn ok(step: u64) -> Self {
        MonitorReport { verdict: Verdict::Ok, witness: Vec::new(), step }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub step: u64,
    pub rule: &'static str,
    pub subjects: Vec<String>,
    pub tag: Option<String>,
    pub heap_before: usize,
    pub heap_after: usize,
    pub verdict: Verdict,
}

/// Fresh heap locations. Never hands out the same location twice, and
/// never one already present in the heap it is asked about.
#[derive(Clone, Debug, Default)]
pub struct Allocator {
    counts: HashMap<Arc<str>, u32>,
}

impl Allocator {
    pub fn new() -> Self {
        Allocator::default()
    }

    /// A fresh location named after the binder `like`.
    pub fn fresh(&mut self, like: &Ident, heap: &Heap) -> Ident {
        let base: Arc<str> = Arc::from(like.base());
        let n = self.counts.entry(base.clone()).or_insert(0);
        loop {
            *n += 1;
            let id = Ident::heap(base.clone(), *n);
            if !heap.contains(&id) {
                return id;
            }
        }
    }
}
