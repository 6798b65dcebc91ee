//! Sequential versus data-parallel execution of the hot loops: scoring a
//! cohort against every model, the relation scan for a single subject, and
//! uniform simulation. Both modes run in the same binary; without the
//! `parallel` feature the "parallel" rows fall back to sequential.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use revpref::dataset::generate_menu_collection;
use revpref::exec::Execution;
use revpref::models::{distance_score_with, ModelKind, Scorer};
use revpref::simulation::{simulate_uniform, SimConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn cohort(subjects: usize, forced: bool) -> Vec<revpref::dataset::Dataset> {
    let mc = generate_menu_collection(6, &[2, 3, 4]).unwrap();
    simulate_uniform(&SimConfig::new(mc, subjects, forced, 141).unwrap(), Execution::Sequential)
}

fn score_cohort(c: &mut Criterion) {
    let data = cohort(141, true);
    // warm the relation catalogues outside the measurement
    for kind in ModelKind::ALL {
        kind.admissible(6).unwrap();
    }
    let mut group = c.benchmark_group("score_cohort_141x3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| Scorer::new(exec).score_all(black_box(&data), &ModelKind::ALL).unwrap())
        });
    }
    group.finish();
}

fn score_single(c: &mut Criterion) {
    let data = cohort(1, false);
    let mut group = c.benchmark_group("score_single_dc");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| distance_score_with(black_box(&data[0]), ModelKind::DominantChoice, exec).unwrap())
        });
    }
    group.finish();
}

fn simulate(c: &mut Criterion) {
    let mc = generate_menu_collection(6, &[2, 3, 4]).unwrap();
    let cfg = SimConfig::new(mc, 10_000, false, 7).unwrap();
    let mut group = c.benchmark_group("simulate_10k");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| simulate_uniform(black_box(&cfg), exec))
        });
    }
    group.finish();
}

criterion_group!(benches, score_cohort, score_single, simulate);
criterion_main!(benches);
