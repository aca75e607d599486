use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::par;
use crate::syntax::{parallel_atoms, Heap, Process, System};

use super::machine::{enabled_atoms, step_atoms, StepError};
use super::monitor::{check, quiescent};
use super::{Allocator, MonitorReport, TraceEvent, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub max_steps: u64,
    /// Check leaks, faults and isolation after every step.
    pub monitor: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, max_steps: 10_000, monitor: false }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub trace: Vec<TraceEvent>,
    pub final_system: System,
    pub report: MonitorReport,
}

pub fn run(sys: &System, seed: u64, max_steps: u64, monitor: bool) -> RunOutcome {
    run_observed(sys, RunOptions { seed, max_steps, monitor }, |_, _| {})
}

/// Like [`run`], calling `observe` on the initial state and after every step.
pub fn run_observed(sys: &System, opts: RunOptions, mut observe: impl FnMut(&Heap, &[Process])) -> RunOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut alloc = Allocator::new();
    let mut heap = sys.heap.clone();
    let mut atoms = parallel_atoms(&sys.process);
    let mut trace = Vec::new();
    observe(&heap, &atoms);
    let finish = |heap: Heap, atoms: Vec<Process>, trace, verdict, witness, step| RunOutcome {
        trace,
        final_system: System { heap, process: Process::par_all(atoms) },
        report: MonitorReport { verdict, witness, step },
    };
    if opts.monitor {
        if let Some((v, w)) = check(&heap, &atoms) {
            return finish(heap, atoms, trace, v, w, 0);
        }
    }
    let mut n = 0;
    loop {
        let redexes = enabled_atoms(&heap, &atoms);
        if redexes.is_empty() {
            let (v, w) = quiescent(&heap, &atoms);
            return finish(heap, atoms, trace, v, w, n);
        }
        if n == opts.max_steps {
            let w = vec![format!("{} enabled redexes after {n} steps", redexes.len())];
            return finish(heap, atoms, trace, Verdict::BudgetExhausted, w, n);
        }
        n += 1;
        let r = &redexes[rng.gen_range(0..redexes.len())];
        let before = heap.len();
        let info = match step_atoms(&mut heap, &mut atoms, r, &mut alloc) {
            Ok(info) => info,
            Err(StepError::Fault(w)) => return finish(heap, atoms, trace, Verdict::Fault, w, n),
            Err(e @ StepError::Stale(_)) => unreachable!("freshly enumerated redex: {e}"),
        };
        observe(&heap, &atoms);
        let violation = if opts.monitor { check(&heap, &atoms) } else { None };
        trace.push(TraceEvent {
            step: n,
            rule: r.rule(),
            subjects: info.subjects.iter().map(|s| s.to_string()).collect(),
            tag: info.tag.map(|t| t.to_string()),
            heap_before: before,
            heap_after: heap.len(),
            verdict: violation.as_ref().map_or(Verdict::Ok, |(v, _)| *v),
        });
        if let Some((v, w)) = violation {
            return finish(heap, atoms, trace, v, w, n);
        }
    }
}

/// Final reports of monitored runs, one per seed.
pub fn run_seeds(sys: &System, seeds: &[u64], max_steps: u64) -> Vec<MonitorReport> {
    par::map(seeds, |&seed| run(sys, seed, max_steps, true).report)
}

pub fn run_seeds_seq(sys: &System, seeds: &[u64], max_steps: u64) -> Vec<MonitorReport> {
    par::map_seq(seeds, |&seed| run(sys, seed, max_steps, true).report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_program;

    fn system(src: &str) -> System {
        System { heap: Heap::new(), process: parse_program(src).unwrap().entry.unwrap() }
    }

    const FRAGMENT: &str = "proc Main() = open(e : +{ arg<a>(a). end }, f). e!arg(f). close(e)";

    #[test]
    fn fragment_leaks_f() {
        let out = run(&system(FRAGMENT), 7, 100, true);
        assert_eq!(out.report.verdict, Verdict::Leak);
        assert_eq!(out.report.witness, vec!["f".to_string()]);
        assert_eq!(out.trace.len(), 2);
        assert_eq!(out.trace.last().unwrap().verdict, Verdict::Leak);
    }

    #[test]
    fn unmonitored_fragment_terminates() {
        assert_eq!(run(&system(FRAGMENT), 0, 100, false).report.verdict, Verdict::Terminated);
    }

    #[test]
    fn zero_steps() {
        let out = run(&system(FRAGMENT), 0, 0, true);
        assert!(out.trace.is_empty());
        assert_eq!(out.report.verdict, Verdict::BudgetExhausted);
    }

    #[test]
    fn deterministic_per_seed() {
        let src = "proc Main() = open(a : +{ m. end, n. end }, b). ((a!m(). close(a) (+) a!n(). close(a)) || (b?m(). close(b) + b?n(). close(b)))";
        let sys = system(src);
        for seed in 0..10 {
            assert_eq!(run(&sys, seed, 100, true).trace, run(&sys, seed, 100, true).trace);
        }
        assert_eq!(run_seeds(&sys, &[1, 2, 3], 100), run_seeds_seq(&sys, &[1, 2, 3], 100));
    }

    #[test]
    fn runaway_recursion_hits_the_budget() {
        let out = run(&system("proc Main() = rec X. open(a : end, b). (close(a) || close(b) || X)"), 0, 50, true);
        assert_eq!(out.report.verdict, Verdict::BudgetExhausted);
        assert_eq!(out.trace.len(), 50);
    }
}
