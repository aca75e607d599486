use crate::syntax::{
    parallel_atoms, push_atoms, rename, substitute_name, unfold_rec, Heap, Ident, Message, Name, Process, ProcessKind,
    System, Tag,
};

use super::{Allocator, Redex, Side};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("redex {0:?} does not match the current state")]
    Stale(Redex),
    #[error("fault: {}", .0.join(", "))]
    Fault(Vec<String>),
}

/// What a step touched, for the trace.
#[derive(Clone, Debug, Default)]
pub(crate) struct StepInfo {
    pub subjects: Vec<Ident>,
    pub tag: Option<Tag>,
}

pub fn enabled(sys: &System) -> Vec<Redex> {
    enabled_atoms(&sys.heap, &parallel_atoms(&sys.process))
}

pub fn step(sys: &System, r: &Redex, alloc: &mut Allocator) -> Result<System, StepError> {
    let mut heap = sys.heap.clone();
    let mut atoms = parallel_atoms(&sys.process);
    step_atoms(&mut heap, &mut atoms, r, alloc)?;
    Ok(System { heap, process: Process::par_all(atoms) })
}

/// The message a receive on `subject` would consume, if a branch handles it.
/// A branch handles a message when the tags agree and both carry an
/// argument or neither does.
pub(crate) fn handled<'a>(heap: &'a Heap, subject: &Name, p: &Process) -> Option<&'a Message> {
    let ProcessKind::Receive { branches, .. } = &p.kind else { return None };
    let head = heap.get(subject.as_loc()?)?.queue.front()?;
    branches
        .iter()
        .any(|b| b.tag == head.tag && b.binder.is_some() == head.argument.is_some())
        .then_some(head)
}

pub(crate) fn enabled_atoms(heap: &Heap, atoms: &[Process]) -> Vec<Redex> {
    let mut out = Vec::new();
    for (i, p) in atoms.iter().enumerate() {
        match &p.kind {
            ProcessKind::Open { .. } => out.push(Redex::Open(i)),
            ProcessKind::Send { subject, .. } => {
                if subject.as_loc().is_some_and(|a| heap.contains(a)) {
                    out.push(Redex::Send(i));
                }
            }
            ProcessKind::Receive { subject, .. } => {
                if let Some(m) = handled(heap, subject, p) {
                    out.push(Redex::Receive(i, m.tag.clone()));
                }
            }
            ProcessKind::Choice(..) => {
                out.push(Redex::Choice(i, Side::Left));
                out.push(Redex::Choice(i, Side::Right));
            }
            ProcessKind::Rec { .. } => out.push(Redex::Rec(i)),
            ProcessKind::Idle | ProcessKind::Close(_) | ProcessKind::Var(_) | ProcessKind::Parallel(..) => {}
        }
    }
    out
}

fn fault(what: String) -> StepError {
    StepError::Fault(vec![what])
}

/// Apply `r` in place. The reduced atom is replaced by the atoms of its
/// continuation.
pub(crate) fn step_atoms(
    heap: &mut Heap,
    atoms: &mut Vec<Process>,
    r: &Redex,
    alloc: &mut Allocator,
) -> Result<StepInfo, StepError> {
    let i = r.atom();
    let stale = || StepError::Stale(r.clone());
    let p = atoms.get(i).ok_or_else(stale)?;
    let mut info = StepInfo::default();
    let next = match (r, &p.kind) {
        (Redex::Open(_), ProcessKind::Open { left, right, body, .. }) => {
            let a = alloc.fresh(left, heap);
            let b = alloc.fresh(right, heap);
            heap.open(a.clone(), b.clone());
            let body = rename(body, &Name::Loc(left.clone()), &Name::Loc(a.clone()));
            info.subjects = vec![a.clone(), b.clone()];
            rename(&body, &Name::Loc(right.clone()), &Name::Loc(b))
        }
        (Redex::Send(_), ProcessKind::Send { subject, tag, argument, body, .. }) => {
            let a = subject.as_loc().ok_or_else(|| fault(format!("send on variable `{subject}`")))?;
            let peer = heap.get(a).ok_or_else(|| fault(format!("send on unallocated `{a}`")))?.peer.clone();
            let c = match argument {
                None => None,
                Some(Name::Loc(c)) => Some(c.clone()),
                Some(v) => return Err(fault(format!("sending unbound variable `{v}`"))),
            };
            let q = heap.get_mut(&peer).ok_or_else(|| fault(format!("peer `{peer}` of `{a}` is unallocated")))?;
            q.queue.push_back(Message { tag: tag.clone(), argument: c.clone() });
            info.subjects = std::iter::once(a.clone()).chain(c).collect();
            info.tag = Some(tag.clone());
            (**body).clone()
        }
        (Redex::Receive(_, want), ProcessKind::Receive { subject, branches }) => {
            let a = subject.as_loc().ok_or_else(stale)?;
            if handled(heap, subject, p).map(|m| &m.tag) != Some(want) {
                return Err(stale());
            }
            let m = heap.get_mut(a).and_then(|e| e.queue.pop_front()).ok_or_else(stale)?;
            let b = branches
                .iter()
                .find(|b| b.tag == m.tag && b.binder.is_some() == m.argument.is_some())
                .ok_or_else(stale)?;
            info.subjects = std::iter::once(a.clone()).chain(m.argument.clone()).collect();
            info.tag = Some(m.tag.clone());
            match (&b.binder, &m.argument) {
                (Some(x), Some(c)) => substitute_name(&b.body, &Name::Loc(c.clone()), x),
                _ => b.body.clone(),
            }
        }
        (Redex::Choice(_, side), ProcessKind::Choice(l, r)) => match side {
            Side::Left => (**l).clone(),
            Side::Right => (**r).clone(),
        },
        (Redex::Rec(_), ProcessKind::Rec { .. }) => unfold_rec(p).map_err(|_| stale())?,
        _ => return Err(stale()),
    };
    let mut replacement = Vec::new();
    push_atoms(&next, &mut replacement);
    atoms.splice(i..=i, replacement);
    Ok(info)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_program;

    fn system(src: &str) -> System {
        let prog = parse_program(src).unwrap();
        System { heap: Heap::new(), process: prog.entry.unwrap() }
    }

    #[test]
    fn open_allocates_a_channel() {
        let sys = system("proc Main() = open(a : end, b). (close(a) || close(b))");
        assert_eq!(enabled(&sys), vec![Redex::Open(0)]);
        let after = step(&sys, &Redex::Open(0), &mut Allocator::new()).unwrap();
        assert_eq!(after.heap.len(), 2);
        let a = after.heap.domain().into_iter().next().unwrap();
        let ep = after.heap.get(&a).unwrap();
        assert!(ep.queue.is_empty());
        assert_eq!(after.heap.get(&ep.peer).unwrap().peer, a);
        assert!(enabled(&after).is_empty());
    }

    #[test]
    fn send_enqueues_at_the_peer_and_receive_pops() {
        let sys = system(
            "proc Main() = open(a : +{ m. end }, b). (a!m(). close(a) || b?m(). close(b))",
        );
        let mut alloc = Allocator::new();
        let s1 = step(&sys, &Redex::Open(0), &mut alloc).unwrap();
        assert_eq!(enabled(&s1), vec![Redex::Send(0)]);
        let s2 = step(&s1, &Redex::Send(0), &mut alloc).unwrap();
        let queued: Vec<_> = s2.heap.iter().filter(|(_, e)| !e.queue.is_empty()).collect();
        assert_eq!(queued.len(), 1);
        assert_eq!(queued[0].0.base(), "b");
        let r = enabled(&s2);
        assert_eq!(r, vec![Redex::Receive(1, Tag::new("m"))]);
        let s3 = step(&s2, &r[0], &mut alloc).unwrap();
        assert!(s3.heap.iter().all(|(_, e)| e.queue.is_empty()));
        assert!(step(&s3, &r[0], &mut alloc).is_err());
    }
}
