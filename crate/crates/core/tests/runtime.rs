mod common;

use std::collections::BTreeMap;

use polysing::runtime::{half_duplex, run, run_observed, run_seeds, run_seeds_seq, RunOptions, Verdict};
use polysing::syntax::{Heap, Ident, Process, System};
use polysing::typecheck::{check_program, CheckOptions};
use proptest::prelude::*;

fn system(file: &str) -> System {
    System { heap: Heap::new(), process: common::fixture(file).entry.unwrap() }
}

/// Fixtures with a `Main` whose every declaration typechecks.
fn typed_programs() -> Vec<String> {
    common::fixture_names()
        .into_iter()
        .filter(|f| {
            let p = common::fixture(f);
            p.entry.is_some() && check_program(&p, &CheckOptions::default()).is_ok()
        })
        .collect()
}

fn queue_lengths(heap: &Heap) -> BTreeMap<Ident, usize> {
    heap.iter().map(|(a, e)| (a.clone(), e.queue.len())).collect()
}

#[test]
fn there_are_typed_programs() {
    let typed = typed_programs();
    for f in ["broker.psg", "cell_client.psg", "fwd_bounded.psg"] {
        assert!(typed.contains(&f.to_string()), "{f}");
    }
}

#[test]
fn typed_programs_are_well_behaved() {
    for f in typed_programs() {
        let sys = system(&f);
        for seed in 0..100 {
            let mut steps = 0;
            let out = run_observed(&sys, RunOptions { seed, max_steps: 10_000, monitor: true }, |heap, _| {
                steps += 1;
                assert!(half_duplex(heap).is_ok(), "{f} seed {seed} step {steps}");
            });
            assert!(!out.report.verdict.is_violation(), "{f} seed {seed}: {:?}", out.report);
            assert_eq!(out.report.verdict, Verdict::Terminated, "{f} seed {seed}");
        }
    }
}

#[test]
fn steps_conserve_the_heap_and_touch_one_queue() {
    for f in common::fixture_names() {
        let prog = common::fixture(&f);
        let Some(entry) = prog.entry else { continue };
        let sys = System { heap: Heap::new(), process: entry };
        for seed in 0..20 {
            let mut states = Vec::new();
            let out = run_observed(&sys, RunOptions { seed, max_steps: 500, monitor: false }, |h, _| states.push(h.clone()));
            for (e, pair) in out.trace.iter().zip(states.windows(2)) {
                let (before, after) = (&pair[0], &pair[1]);
                let (qb, qa) = (queue_lengths(before), queue_lengths(after));
                let common_keys: Vec<_> = qb.keys().filter(|k| qa.contains_key(*k)).collect();
                let changed: Vec<(i64, &Ident)> = common_keys
                    .into_iter()
                    .filter(|k| qb[*k] != qa[*k])
                    .map(|k| (qa[k] as i64 - qb[k] as i64, k))
                    .collect();
                match e.rule {
                    "R-Open" => {
                        assert_eq!(after.len(), before.len() + 2, "{f}");
                        assert!(changed.is_empty());
                        let fresh: Vec<_> = after.domain().difference(&before.domain()).cloned().collect();
                        assert_eq!(fresh.len(), 2);
                        assert_eq!(after.get(&fresh[0]).unwrap().peer, fresh[1]);
                        assert_eq!(after.get(&fresh[1]).unwrap().peer, fresh[0]);
                        assert!(fresh.iter().all(|a| after.get(a).unwrap().queue.is_empty()));
                    }
                    rule => {
                        assert_eq!(after.domain(), before.domain(), "{f} {rule}");
                        match rule {
                            "R-Send" => {
                                assert_eq!(changed.len(), 1, "{f}");
                                assert_eq!(changed[0].0, 1);
                                let q = &after.get(changed[0].1).unwrap().queue;
                                assert_eq!(q.back().unwrap().tag.as_str(), e.tag.as_deref().unwrap());
                            }
                            "R-Receive" => {
                                assert_eq!(changed.len(), 1, "{f}");
                                assert_eq!(changed[0].0, -1);
                                let head = before.get(changed[0].1).unwrap().queue.front().unwrap();
                                assert_eq!(head.tag.as_str(), e.tag.as_deref().unwrap());
                            }
                            _ => assert!(changed.is_empty(), "{f} {rule}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn leak_fragment_leaks_f_quickly() {
    let sys = system("leak_fragment.psg");
    for seed in 0..20 {
        let out = run(&sys, seed, 10_000, true);
        assert_eq!(out.report.verdict, Verdict::Leak);
        assert_eq!(out.report.witness, vec!["f".to_string()]);
        assert!(out.report.step <= 5);
    }
}

#[test]
fn forwarding_into_its_own_queue_leaks() {
    let sys = system("stream_leak.psg");
    for seed in 0..20 {
        let out = run(&sys, seed, 10_000, true);
        assert_eq!((out.report.verdict, out.report.witness), (Verdict::Leak, vec!["f".to_string()]), "seed {seed}");
    }
}

#[test]
fn ill_typed_scripts_misbehave() {
    assert_eq!(run(&system("isolation.psg"), 0, 100, true).report.verdict, Verdict::IsolationViolation);
    let out = run(&system("comm_error.psg"), 0, 100, true);
    assert_eq!(out.report.verdict, Verdict::CommunicationError);
    assert!(!out.report.witness.is_empty());
}

#[test]
fn zero_step_budget() {
    let out = run(&system("cell_client.psg"), 0, 0, true);
    assert!(out.trace.is_empty());
    assert_eq!(out.report.verdict, Verdict::BudgetExhausted);
    let idle = run(&System { heap: Heap::new(), process: Process::idle() }, 0, 0, true);
    assert_eq!(idle.report.verdict, Verdict::Terminated);
}

#[test]
fn batch_matches_sequential() {
    let sys = system("broker.psg");
    let seeds: Vec<u64> = (0..32).collect();
    assert_eq!(run_seeds(&sys, &seeds, 10_000), run_seeds_seq(&sys, &seeds, 10_000));
}

#[test]
fn step_numbers_increase() {
    let out = run(&system("fwd_bounded.psg"), 5, 10_000, true);
    assert!(out.trace.windows(2).all(|w| w[0].step < w[1].step));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let sys = system("broker.psg");
        let a = run(&sys, seed, 10_000, true);
        let b = run(&sys, seed, 10_000, true);
        prop_assert_eq!(a.trace, b.trace);
        prop_assert_eq!(a.report, b.report);
    }

    #[test]
    fn regrouping_atoms_does_not_change_the_verdict(seed in any::<u64>(), stop in 0u64..20, rot in 0usize..8) {
        let sys = system("fwd_bounded.psg");
        let mid = run(&sys, seed, stop, false).final_system;
        let mut atoms = polysing::syntax::parallel_atoms(&mid.process);
        let before = polysing::runtime::monitor(&mid).verdict;
        let n = atoms.len().max(1);
        atoms.rotate_left(rot % n);
        let regrouped = System { heap: mid.heap.clone(), process: Process::par_all(atoms.clone()) };
        prop_assert_eq!(polysing::runtime::monitor(&regrouped).verdict, before);
        prop_assert_eq!(polysing::runtime::enabled(&regrouped).len(), polysing::runtime::enabled(&mid).len());
        prop_assert_eq!(polysing::syntax::parallel_atoms(&regrouped.process).len(), atoms.len());
    }
}
