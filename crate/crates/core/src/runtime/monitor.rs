use std::collections::BTreeSet;

use crate::surface::print_process;
use crate::syntax::{free_names, parallel_atoms, Heap, Ident, Name, Process, ProcessKind, System};

use super::machine::{enabled_atoms, handled};
use super::{reachable, MonitorReport, Verdict};

pub fn monitor(sys: &System) -> MonitorReport {
    let atoms = parallel_atoms(&sys.process);
    let (verdict, witness) = check(&sys.heap, &atoms).unwrap_or_else(|| {
        if enabled_atoms(&sys.heap, &atoms).is_empty() {
            quiescent(&sys.heap, &atoms)
        } else {
            (Verdict::Ok, Vec::new())
        }
    });
    MonitorReport { verdict, witness, step: 0 }
}

/// The first peer pair with both queues nonempty.
pub fn half_duplex(heap: &Heap) -> Result<(), (Ident, Ident)> {
    for (a, ep) in heap.iter() {
        if let Some(peer) = heap.get(&ep.peer) {
            if !ep.queue.is_empty() && !peer.queue.is_empty() {
                return Err((a.clone(), ep.peer.clone()));
            }
        }
    }
    Ok(())
}

fn roots(p: &Process) -> (BTreeSet<Ident>, Vec<Name>) {
    let mut locs = BTreeSet::new();
    let mut vars = Vec::new();
    for n in free_names(p) {
        match n {
            Name::Loc(a) => {
                locs.insert(a);
            }
            v => vars.push(v),
        }
    }
    (locs, vars)
}

fn names(ls: impl IntoIterator<Item = Ident>) -> Vec<String> {
    ls.into_iter().map(|l| l.to_string()).collect()
}

/// Leak, fault and isolation checks, which apply to every state.
pub(crate) fn check(heap: &Heap, atoms: &[Process]) -> Option<(Verdict, Vec<String>)> {
    let mut all_roots = BTreeSet::new();
    let mut per_atom = Vec::with_capacity(atoms.len());
    for p in atoms {
        let (locs, vars) = roots(p);
        if !vars.is_empty() {
            return Some((Verdict::Fault, vars.iter().map(|v| v.to_string()).collect()));
        }
        all_roots.extend(locs.iter().cloned());
        per_atom.push(reachable(&locs, heap));
    }
    let reach = reachable(&all_roots, heap);
    let dom = heap.domain();
    let dangling: Vec<Ident> = reach.difference(&dom).cloned().collect();
    if !dangling.is_empty() {
        return Some((Verdict::Fault, names(dangling)));
    }
    let leaked: Vec<Ident> = dom.difference(&reach).cloned().collect();
    if !leaked.is_empty() {
        return Some((Verdict::Leak, names(leaked)));
    }
    for i in 0..per_atom.len() {
        for j in i + 1..per_atom.len() {
            let shared: Vec<Ident> = per_atom[i].intersection(&per_atom[j]).cloned().collect();
            if !shared.is_empty() {
                return Some((Verdict::IsolationViolation, names(shared)));
            }
        }
    }
    None
}

/// Classify a state with no enabled redex.
pub(crate) fn quiescent(heap: &Heap, atoms: &[Process]) -> (Verdict, Vec<String>) {
    let mut waiting = Vec::new();
    for p in atoms {
        match &p.kind {
            ProcessKind::Idle => {}
            ProcessKind::Close(Name::Loc(a)) if heap.contains(a) => {}
            ProcessKind::Receive { subject: Name::Loc(a), .. } if heap.contains(a) => {
                let ep = heap.get(a).expect("allocated");
                if let Some(m) = ep.queue.front() {
                    debug_assert!(handled(heap, &Name::Loc(a.clone()), p).is_none());
                    return (Verdict::CommunicationError, vec![a.to_string(), m.tag.to_string()]);
                }
                waiting.push(print_process(p));
            }
            _ => return (Verdict::Fault, vec![print_process(p)]),
        }
    }
    if waiting.is_empty() {
        let rest: Vec<String> = atoms.iter().map(print_process).collect();
        (Verdict::Terminated, if rest.is_empty() { vec!["0".to_string()] } else { rest })
    } else {
        (Verdict::Deadlock, waiting)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Endpoint, Message, Tag};

    #[test]
    fn idle_terminates() {
        let r = monitor(&System { heap: Heap::new(), process: Process::idle() });
        assert_eq!(r.verdict, Verdict::Terminated);
        assert!(!r.witness.is_empty());
    }

    #[test]
    fn fragment_end_state_leaks_f() {
        let (e, f) = (Ident::new("e"), Ident::new("f"));
        let mut heap = Heap::new();
        heap.insert(e.clone(), Endpoint { peer: f.clone(), queue: Default::default() });
        heap.insert(f.clone(), Endpoint { peer: e.clone(), queue: [Message { tag: Tag::new("arg"), argument: Some(f) }].into() });
        let r = monitor(&System { heap, process: Process::close(Name::Loc(e)) });
        assert_eq!((r.verdict, r.witness), (Verdict::Leak, vec!["f".to_string()]));
    }

    #[test]
    fn shared_location_is_an_isolation_violation() {
        let (a, b) = (Ident::new("a"), Ident::new("b"));
        let mut heap = Heap::new();
        heap.open(a.clone(), b.clone());
        let p = Process::par_all([
            Process::close(Name::Loc(a.clone())),
            Process::close(Name::Loc(a.clone())),
            Process::close(Name::Loc(b)),
        ]);
        let r = monitor(&System { heap, process: p });
        assert_eq!((r.verdict, r.witness), (Verdict::IsolationViolation, vec!["a".to_string()]));
    }

    #[test]
    fn half_duplex_detects_two_queues() {
        let (a, b) = (Ident::new("a"), Ident::new("b"));
        let mut heap = Heap::new();
        heap.open(a.clone(), b.clone());
        assert!(half_duplex(&heap).is_ok());
        for x in [&a, &b] {
            heap.get_mut(x).unwrap().queue.push_back(Message { tag: Tag::new("m"), argument: None });
        }
        assert!(half_duplex(&heap).is_err());
    }
}
