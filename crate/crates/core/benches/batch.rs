use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use polysing::runtime::{run_seeds, run_seeds_seq};
use polysing::surface::parse_program;
use polysing::syntax::{Heap, System};
use polysing::typecheck::{check_program, check_program_seq, CheckOptions};

const FWD: &str = include_str!("../../../fixtures/fwd_bounded.psg");
const BROKER: &str = include_str!("../../../fixtures/broker.psg");
const CELL: &str = include_str!("../../../fixtures/cell_client.psg");

fn seeds(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_seeds");
    group.sample_size(10);
    for (name, src) in [("fwd_bounded", FWD), ("broker", BROKER)] {
        let sys = System { heap: Heap::new(), process: parse_program(src).unwrap().entry.unwrap() };
        let seeds: Vec<u64> = (0..512).collect();
        group.bench_with_input(BenchmarkId::new("parallel", name), &sys, |b, sys| {
            b.iter(|| run_seeds(black_box(sys), &seeds, 10_000))
        });
        group.bench_with_input(BenchmarkId::new("sequential", name), &sys, |b, sys| {
            b.iter(|| run_seeds_seq(black_box(sys), &seeds, 10_000))
        });
    }
    group.finish();
}

// Many copies of the cell declarations, so there is something to spread.
fn many_cells(n: usize) -> String {
    let mut src = String::from("def CellT = rec a. +{ set<b>(b). &{ get(b). a }, free. end }\n");
    for i in 0..n {
        let body = CELL.lines().filter(|l| l.starts_with("proc") || l.starts_with("  ")).collect::<Vec<_>>().join("\n");
        src.push_str(&body.replace("Cell(", &format!("Cell{i}(")).replace("User(", &format!("User{i}(")).replace("Main(", &format!("M{i}(")));
        src.push('\n');
    }
    src
}

fn checking(c: &mut Criterion) {
    let prog = parse_program(&many_cells(200)).unwrap();
    let opts = CheckOptions::default();
    let mut group = c.benchmark_group("check_program");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| check_program(black_box(&prog), &opts)));
    group.bench_function("sequential", |b| b.iter(|| check_program_seq(black_box(&prog), &opts)));
    group.finish();
}

criterion_group!(benches, seeds, checking);
criterion_main!(benches);
